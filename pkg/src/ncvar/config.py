"""Session-level settings for the jet space.

The base dimension ``n``, the number of generators ``m`` and the
commutative switch are read from a context variable, so a whole
computation can be run in another setting with ``with jet_space(...)``.
"""
from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class JetSpace:
    n: int = 1
    m: int = 1
    commutative: bool = False


_current: ContextVar[JetSpace] = ContextVar("ncvar_jet_space", default=JetSpace())


def current() -> JetSpace:
    return _current.get()


@contextmanager
def jet_space(n: int | None = None, m: int | None = None, commutative: bool | None = None):
    """Temporarily change the session settings.

    Arguments left as ``None`` keep their current value.
    """
    space = current()
    changes = {k: v for k, v in (("n", n), ("m", m), ("commutative", commutative)) if v is not None}
    new = replace(space, **changes)
    if new.n < 1 or new.m < 1:
        raise ValueError("jet space needs n >= 1 and m >= 1")
    token = _current.set(new)
    try:
        yield new
    finally:
        _current.reset(token)
