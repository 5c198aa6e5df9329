"""Operation counting and tunables for polynomial arithmetic.

Counters are activated with ``with OpCounter() as ops:``; every coefficient
multiplication executed inside the block (on this thread or on work submitted
with :func:`contextvars.copy_context`) is added to each active counter.
"""

from __future__ import annotations

import contextlib
import math
import threading
from contextvars import ContextVar

DEFAULT_CUTOFF = 32

_active: ContextVar[tuple["OpCounter", ...]] = ContextVar("digitfactor_counters", default=())
_cutoff: ContextVar[float] = ContextVar("digitfactor_cutoff", default=DEFAULT_CUTOFF)


class OpCounter:
    """Thread-safe tally of coefficient multiplications and gcd calls."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.mul = 0
        self.gcd = 0
        self._tokens: list = []

    def add(self, mul: int = 0, gcd: int = 0) -> None:
        with self._lock:
            self.mul += mul
            self.gcd += gcd

    def as_dict(self) -> dict[str, int]:
        return {"coeff_mul": self.mul, "gcd": self.gcd}

    def __enter__(self) -> "OpCounter":
        self._tokens.append(_active.set(_active.get() + (self,)))
        return self

    def __exit__(self, *exc) -> None:
        _active.reset(self._tokens.pop())

    def __repr__(self) -> str:
        return f"OpCounter(mul={self.mul}, gcd={self.gcd})"


def record_mul(n: int) -> None:
    for c in _active.get():
        c.add(mul=n)


def record_gcd(n: int = 1) -> None:
    for c in _active.get():
        c.add(gcd=n)


def get_cutoff() -> float:
    return _cutoff.get()


@contextlib.contextmanager
def mul_cutoff(n: float):
    """Temporarily change the schoolbook/fast multiplication crossover.

    ``mul_cutoff(math.inf)`` forces quadratic arithmetic everywhere, which is
    the negative control used by the scaling benchmark.
    """
    if n < 1:
        raise ValueError("cutoff must be at least 1")
    token = _cutoff.set(n)
    try:
        yield
    finally:
        _cutoff.reset(token)


def schoolbook_only():
    return mul_cutoff(math.inf)
