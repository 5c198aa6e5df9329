"""Digit polynomials: integer polynomials f with f(b) = N.

Digit polynomials keep exact integer coefficients; they are reduced mod N
only when handed to :mod:`digitfactor.polyring` via :meth:`DigitPoly.mod`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .ntcore import FactorLeak, gcd, integer_kth_root, mod_inverse
from .polyring import ModPoly

__all__ = [
    "DigitPoly",
    "QuadFamily",
    "FamilyRejected",
    "exact_eval",
    "is_digit_poly",
    "badic_digit_poly",
    "linear_digit_poly",
    "companion_zero",
    "lemma_base_range",
    "quad_family",
    "digit_condition_survey",
]


def exact_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class DigitPoly:
    """An integer polynomial certified to satisfy f(base) == target."""

    coeffs: tuple[int, ...]
    base: int
    target: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))
        if exact_eval(self.coeffs, self.base) != self.target:
            raise ValueError(f"f({self.base}) != {self.target}")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x: int) -> int:
        return exact_eval(self.coeffs, x)

    def mod(self, N: int | None = None) -> ModPoly:
        return ModPoly(self.coeffs, self.target if N is None else N)

    def __str__(self) -> str:
        return str(ModPoly(self.coeffs, max(2, max(map(abs, self.coeffs), default=0) + 1)))


def is_digit_poly(coeffs: Sequence[int], b: int, N: int) -> bool:
    return exact_eval(coeffs, b) == N


def badic_digit_poly(N: int, b: int) -> DigitPoly:
    """P_b: the polynomial whose coefficients are the base-b digits of N."""
    if b < 2:
        raise ValueError("base must be at least 2")
    if N < 0:
        raise ValueError("N must be non-negative")
    digits = []
    n = N
    while n:
        n, r = divmod(n, b)
        digits.append(r)
    return DigitPoly(tuple(digits), b, N)


def linear_digit_poly(N: int, b: int) -> DigitPoly:
    """X + (N - b), which reduces to X - b mod N."""
    if not 0 <= b < N:
        raise ValueError("base must lie in Z_N")
    return DigitPoly((N - b, 1), b, N)


def companion_zero(f: DigitPoly, N: int | None = None) -> int:
    """Second zero n0 * n2^-1 * b^-1 mod N of a quadratic digit polynomial.

    Raises FactorLeak if n2 or b shares a nontrivial factor with N.
    """
    N = f.target if N is None else N
    if f.degree != 2:
        raise ValueError("companion zero needs a degree-2 digit polynomial")
    n0, _, n2 = f.coeffs
    unit = n2 * f.base
    inv = mod_inverse(unit % N, N)
    if inv is None:
        g = gcd(unit, N)
        if 1 < g < N:
            raise FactorLeak(g, N, "n2*b not invertible")
        raise ValueError("n2*b is divisible by N")
    return n0 * inv % N


class FamilyRejected(ValueError):
    """A quadratic family hypothesis failed; ``base`` and ``condition`` say which."""

    def __init__(self, condition: str, base: int | None = None, detail: str = ""):
        self.condition = condition
        self.base = base
        msg = condition if base is None else f"{condition} at base {base}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class QuadFamily:
    target: int
    bases: tuple[int, ...]
    polys: tuple[DigitPoly, ...]
    companion_bases: tuple[int, ...]
    D: int
    zeros: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "zeros", self.bases + self.companion_bases)

    @property
    def d(self) -> int:
        return len(self.bases)

    def product(self) -> ModPoly:
        N = self.target
        g = ModPoly((1,), N)
        for f in self.polys:
            g = g * f.mod(N)
        return g


def lemma_base_range(N: int) -> tuple[int, int]:
    """(least c with 2c^2 >= N, floor(sqrt(N)))."""
    c = integer_kth_root(N // 2, 2)
    while 2 * c * c < N:
        c += 1
    return c, integer_kth_root(N, 2)


def _coprime_or_leak(value: int, N: int, what: str, base: int | None = None) -> None:
    g = gcd(value, N)
    if g == 1:
        return
    if g < N:
        raise FactorLeak(g, N, what)
    raise FamilyRejected(what, base, "value divisible by N")


def quad_family(N: int, b_start: int, d: int) -> QuadFamily:
    """Consecutive b-adic quadratic digit polynomials meeting the base-range lemma.

    Raises FamilyRejected naming the failing condition, or FactorLeak when a
    coprimality check turns up a divisor of N.
    """
    if d < 1:
        raise FamilyRejected("d >= 1")
    lo, hi = lemma_base_range(N)
    bases = tuple(range(b_start, b_start + d))
    if bases[0] < lo or bases[-1] > hi:
        raise FamilyRejected("base range", None, f"bases must lie in [{lo}, {hi}]")
    polys = []
    for b in bases:
        _coprime_or_leak(b, N, "gcd(b, N) = 1", b)
        P = badic_digit_poly(N, b)
        if P.degree != 2 or P.coeffs[2] != 1:
            raise FamilyRejected("n2 = 1", b)
        n0, n1, _ = P.coeffs
        if n1 > n0 + 1:
            raise FamilyRejected("n1 <= n0 + 1", b, f"n1={n1}, n0={n0}")
        polys.append(P)
    D = bases[0] + N // bases[-1]
    for z in range(2 * d - 1):
        _coprime_or_leak(D + z, N, f"gcd(D+{z}, N) = 1")
    companions = tuple((-(N // b)) % N for b in bases)
    return QuadFamily(N, bases, tuple(polys), companions, D)


def digit_condition_survey(N: int) -> dict:
    """How many bases in the lemma range have n1 <= n0 + 1 (and are coprime to N)."""
    lo, hi = lemma_base_range(N)
    total = ok = coprime_ok = 0
    for b in range(lo, hi + 1):
        P = badic_digit_poly(N, b)
        if P.degree != 2:
            continue
        total += 1
        n0, n1, _ = P.coeffs
        if n1 <= n0 + 1:
            ok += 1
            if gcd(b, N) == 1:
                coprime_ok += 1
    return {
        "N": N,
        "range": [lo, hi],
        "bases": total,
        "digit_condition_holds": ok,
        "digit_condition_and_coprime": coprime_ok,
        "rate": ok / total if total else None,
    }
