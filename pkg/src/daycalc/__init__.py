"""Finite category theory toolkit: profunctors, Day extension of partial
operations and spans, residuals, operad law checks, and a model checker for
hybrid and separation logic built on those constructions."""

__version__ = "0.1.0"
