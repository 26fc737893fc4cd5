"""Exception hierarchy shared by all modules."""


class DayError(Exception):
    pass


class UnknownElement(DayError, KeyError):
    def __init__(self, element, where=""):
        self.element = element
        msg = f"unknown element {element!r}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class SizeGuard(DayError):
    """Raised when an enumeration would exceed the configured limit."""

    def __init__(self, what, size, limit):
        self.what, self.size, self.limit = what, size, limit
        super().__init__(f"{what}: size {size} exceeds guard {limit}")


class CategoryError(DayError):
    def __init__(self, message, violations=()):
        self.violations = list(violations)
        super().__init__(message)


class NotAPoset(CategoryError):
    pass


class FunctorError(DayError):
    pass


class ShapeMismatch(DayError):
    pass


class ArityMismatch(ShapeMismatch):
    pass


class DomainMismatch(ShapeMismatch):
    pass


class UnknownSymbol(DayError):
    pass


class MissingStructure(DayError):
    pass


class ParseError(DayError):
    def __init__(self, message, line=None, column=None, source=None):
        self.line, self.column, self.source = line, column, source
        loc = ""
        if line is not None:
            loc = f"{source or '<input>'}:{line}:{column or 1}: "
        super().__init__(loc + message)


class SemanticError(DayError):
    def __init__(self, message, culprit=None):
        self.culprit = culprit
        super().__init__(message)
