"""Per-context guard limits and debug switches.

Limits live in a :class:`contextvars.ContextVar` so concurrent callers can
use different settings without sharing mutable state.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace

from .errors import SizeGuard


@dataclass(frozen=True)
class Settings:
    carrier: int = 10**5
    enum: int = 10**6
    # re-check coend actions against every class member
    debug: bool = False
    # eager exhaustive validation of constructed categories/functors
    validate: bool = True


_settings: contextvars.ContextVar[Settings] = contextvars.ContextVar(
    "daycalc_settings", default=Settings()
)


def current() -> Settings:
    return _settings.get()


@contextlib.contextmanager
def settings(**overrides):
    token = _settings.set(replace(_settings.get(), **overrides))
    try:
        yield _settings.get()
    finally:
        _settings.reset(token)


def check_carrier(what: str, size: int) -> None:
    limit = current().carrier
    if size > limit:
        raise SizeGuard(what, size, limit)


def check_enum(what: str, size: int) -> None:
    limit = current().enum
    if size > limit:
        raise SizeGuard(what, size, limit)
