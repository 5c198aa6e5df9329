"""Primality characterizations through powers of digit polynomials.

For odd N that is not a prime power and a digit polynomial f with
gcd(lc f, N) = 1 and deg f below the largest prime factor of N, N is prime
exactly when f(x)^(N-1) mod N lies in {0, 1} for every x in Z_N (Fermat
form), or f(x)^((N-1)/2) mod N lies in {0, 1, N-1} (Euler form). These scans
cost one exponentiation per residue and are only practical for small N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .digitpoly import DigitPoly
from .ntcore import gcd, perfect_power, pow_mod
from .polyring import eval_horner

DEFAULT_BOUND = 10**4
MODES = ("fermat", "euler")
PRIME_CONSISTENT = "prime-consistent"
COMPOSITE = "composite-with-witness"

__all__ = [
    "CharVerdict",
    "MODES",
    "PRIME_CONSISTENT",
    "COMPOSITE",
    "fermat_value",
    "euler_value",
    "allowed_values",
    "exhaustive_characterization",
]


def _fx(N: int, f: DigitPoly, x: int) -> int:
    return eval_horner(f.mod(N), x % N)


def fermat_value(N: int, f: DigitPoly, x: int) -> int:
    """f(x)^(N-1) mod N."""
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be odd and at least 3")
    return pow_mod(_fx(N, f, x), N - 1, N)


def euler_value(N: int, f: DigitPoly, x: int) -> int:
    """f(x)^((N-1)/2) mod N; the value N-1 stands for -1."""
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be odd and at least 3")
    return pow_mod(_fx(N, f, x), (N - 1) // 2, N)


def allowed_values(N: int, mode: str) -> frozenset[int]:
    if mode == "fermat":
        return frozenset({0, 1})
    if mode == "euler":
        return frozenset({0, 1, N - 1})
    raise ValueError(f"mode must be one of {MODES}")


@dataclass
class CharVerdict:
    N: int
    poly: DigitPoly
    mode: str
    verdict: str
    witness: int | None
    checked: int
    preconditions: dict = field(default_factory=dict)
    factor_leak: int | None = None

    @property
    def is_composite(self) -> bool:
        return self.verdict == COMPOSITE

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "poly": list(self.poly.coeffs),
            "base": self.poly.base,
            "mode": self.mode,
            "verdict": self.verdict,
            "witness": self.witness,
            "checked": self.checked,
            "preconditions": dict(self.preconditions),
            "factor_leak": self.factor_leak,
        }


def exhaustive_characterization(
    N: int,
    f: DigitPoly,
    mode: str = "fermat",
    *,
    bound: int = DEFAULT_BOUND,
    known_factors: list[int] | None = None,
) -> CharVerdict:
    """Scan x = 0, 1, ... and stop at the first value outside the allowed set.

    Precondition checks never block the scan; they are recorded in
    ``preconditions``. The degree condition is ``"verified"`` or
    ``"violated"`` when ``known_factors`` is given and ``"unverified"``
    otherwise. A nontrivial gcd(lc f, N) is recorded as ``factor_leak``.
    """
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be odd and at least 3")
    if N > bound:
        raise ValueError(f"N = {N} exceeds the exhaustive bound {bound}")
    allowed = allowed_values(N, mode)
    if f.target != N:
        raise ValueError("f is not a digit polynomial of N")
    t = gcd(f.lc, N)
    leak = t if 1 < t < N else None
    if known_factors:
        q = max(known_factors)
        degree = "verified" if f.degree < q else "violated"
    else:
        degree = "unverified"
    pre = {
        "odd": True,
        "not_prime_power": perfect_power(N) is None,
        "lc_coprime": t == 1,
        "degree_condition": degree,
    }
    fN = f.mod(N)
    e = N - 1 if mode == "fermat" else (N - 1) // 2
    for x in range(N):
        v = pow(eval_horner(fN, x), e, N)
        if v not in allowed:
            return CharVerdict(N, f, mode, COMPOSITE, x, x + 1, pre, leak)
    return CharVerdict(N, f, mode, PRIME_CONSISTENT, None, N, pre, leak)
