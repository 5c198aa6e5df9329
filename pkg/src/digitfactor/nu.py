"""Counting suitable and vanishing integers by exhaustive enumeration.

``x`` is suitable for ``g`` when ``1 < gcd(g(x), N) < N``; ``nu`` is the number
of suitable ``x`` in Z_N. Everything here enumerates all of Z_N, so it is only
meant for small N (default bound 10^6).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .digitpoly import QuadFamily, quad_family
from .ntcore import gcd
from .polyring import ModPoly, SubproductTree, eval_horner

DEFAULT_BOUND = 10**6
TREE_BLOCK = 4096
_VECTOR_LIMIT = 1 << 31  # (N-1)^2 + N must fit in int64
_CHUNK = 1 << 18

__all__ = [
    "NuReport",
    "LinearTheoremReport",
    "QuadTheoremReport",
    "DEFAULT_BOUND",
    "is_suitable",
    "values_mod",
    "nu_bruteforce",
    "nu_formula",
    "nu_bound",
    "count_roots_mod",
    "vanishing_points",
    "verify_linear_product_theorem",
    "verify_quadratic_product_theorem",
]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("DIGITFACTOR_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass
class NuReport:
    N: int
    suitable_count: int
    vanishing_count: int | None = None
    roots_mod_p: int | None = None
    roots_mod_q: int | None = None
    formula_value: int | None = None
    bound_value: int | None = None
    method: str = "vector"

    @property
    def formula_match(self) -> bool | None:
        if self.formula_value is None:
            return None
        return self.formula_value == self.suitable_count

    def to_dict(self) -> dict:
        d = asdict(self)
        d["formula_match"] = self.formula_match
        return d


def is_suitable(x: int, g: ModPoly, N: int | None = None) -> bool:
    N = g.modulus if N is None else N
    t = gcd(eval_horner(g, x) % N, N)
    return 1 < t < N


def _check_bound(N: int, bound: int) -> None:
    if N < 2:
        raise ValueError("N must be at least 2")
    if N > bound:
        raise ValueError(f"N = {N} exceeds the exhaustive bound {bound}")


def _horner_block(coeffs: Sequence[int], N: int, lo: int, hi: int) -> np.ndarray:
    x = np.arange(lo, hi, dtype=np.int64)
    acc = np.zeros(hi - lo, dtype=np.int64)
    for c in reversed(coeffs):
        acc *= x
        acc += c
        acc %= N
    return acc


def values_mod(f: ModPoly, N: int | None = None) -> np.ndarray:
    """f(x) mod N for every x in Z_N, as an int64 array (requires N < 2^31)."""
    N = f.modulus if N is None else N
    if N >= _VECTOR_LIMIT:
        raise ValueError("vectorised evaluation needs N < 2^31")
    coeffs = [c % N for c in f.coeffs]
    spans = [(lo, min(lo + _CHUNK, N)) for lo in range(0, N, _CHUNK)]
    if len(spans) > 1 and _workers() > 1:
        with ThreadPoolExecutor(_workers()) as ex:
            parts = list(ex.map(lambda s: _horner_block(coeffs, N, *s), spans))
    else:
        parts = [_horner_block(coeffs, N, lo, hi) for lo, hi in spans]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _suitable_mask(vals: np.ndarray, N: int) -> np.ndarray:
    g = np.gcd(vals, np.int64(N))
    return (g > 1) & (g < N)


def _tree_values(f: ModPoly, N: int, block: int) -> list[int]:
    out: list[int] = []
    for lo in range(0, N, block):
        pts = list(range(lo, min(lo + block, N)))
        vals = SubproductTree(pts, N).evaluate(f)
        for s in (pts[0], pts[-1], pts[len(pts) // 2]):
            if vals[s - lo] != eval_horner(f, s):
                raise AssertionError(f"multipoint/Horner mismatch at x={s}")
        out.extend(vals)
    return out


def nu_bruteforce(
    g: ModPoly,
    N: int | None = None,
    *,
    bound: int = DEFAULT_BOUND,
    method: str = "auto",
    block: int = TREE_BLOCK,
) -> NuReport:
    """Exact count of suitable x over Z_N.

    ``method="vector"`` evaluates with numpy Horner; ``method="tree"`` uses
    blocked multipoint evaluation with Horner spot-checks. ``"auto"`` picks
    the vector path whenever N fits it.
    """
    N = g.modulus if N is None else N
    _check_bound(N, bound)
    if g.modulus != N:
        g = ModPoly(g.coeffs, N)
    if method == "auto":
        method = "vector" if N < _VECTOR_LIMIT else "tree"
    if method == "vector":
        count = int(_suitable_mask(values_mod(g, N), N).sum())
    elif method == "tree":
        if g.is_zero():
            count = 0
        else:
            count = sum(1 for v in _tree_values(g, N, block) if 1 < gcd(v, N) < N)
    else:
        raise ValueError(f"unknown method {method!r}")
    return NuReport(N=N, suitable_count=count, method=method)


def nu_formula(n_roots_p: int, m_roots_q: int, p: int, q: int) -> int:
    """m*p + n*q - 2*n*m, with n roots mod p and m roots mod q."""
    if n_roots_p < 0 or m_roots_q < 0:
        raise ValueError("root counts must be non-negative")
    n, m = n_roots_p, m_roots_q
    return m * p + n * q - 2 * n * m


def nu_bound(d: int, p: int, q: int) -> int:
    """d*p + d*q - 2*d^2; only claimed for 2d < p <= q."""
    if not (2 * d < p <= q):
        raise ValueError("bound requires 2d < p <= q")
    return d * p + d * q - 2 * d * d


def count_roots_mod(f: ModPoly, p: int, *, bound: int = DEFAULT_BOUND) -> int:
    """Number of x in Z_p with f(x) = 0 mod p, by exhaustive evaluation."""
    _check_bound(p, bound)
    fp = ModPoly(f.coeffs, p)
    if fp.is_zero():
        return p
    return int((values_mod(fp, p) == 0).sum())


def vanishing_points(
    factors: Sequence[ModPoly], N: int | None = None, *, bound: int = DEFAULT_BOUND
) -> set[int]:
    """x with gcd(prod f_i(x), N) = N although some single f_i is suitable at x."""
    if not factors:
        return set()
    N = factors[0].modulus if N is None else N
    _check_bound(N, bound)
    prod = np.ones(N, dtype=np.int64)
    any_suitable = np.zeros(N, dtype=bool)
    for f in factors:
        v = values_mod(ModPoly(f.coeffs, N), N)
        any_suitable |= _suitable_mask(v, N)
        prod = prod * v % N
    return set(np.nonzero((prod == 0) & any_suitable)[0].tolist())


def _product(polys: Sequence[ModPoly], N: int) -> ModPoly:
    g = ModPoly.constant(1, N)
    for f in polys:
        g = g * ModPoly(f.coeffs, N)
    return g


@dataclass
class LinearTheoremReport:
    N: int
    p: int
    q: int
    bases: list[int]
    hypotheses_ok: bool
    failed_hypothesis: str | None = None
    factor_leak: int | None = None
    brute_force: int | None = None
    formula: int | None = None
    vanishing_count: int | None = None
    vanishing_pairs: int | None = None
    holds: bool | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _check_semiprime(N: int, p: int, q: int) -> None:
    if p * q != N or p == q or min(p, q) < 2:
        raise ValueError("expected N = p*q with distinct p, q")


def verify_linear_product_theorem(
    N: int, p: int, q: int, bases: Sequence[int], *, bound: int = DEFAULT_BOUND
) -> LinearTheoremReport:
    """Brute-force nu of prod (X - b_i) against d*p + d*q - 2*d^2.

    A hypothesis failure (gcd(b_i, N) != 1 or gcd(b_j - b_k, N) != 1) is
    reported with the gcd it produced rather than checked for equality.
    """
    _check_semiprime(N, p, q)
    bases = [b % N for b in bases]
    rep = LinearTheoremReport(N, p, q, list(bases), hypotheses_ok=True)
    for b in bases:
        t = gcd(b, N)
        if t != 1:
            rep.hypotheses_ok = False
            rep.failed_hypothesis = f"gcd({b}, N) = {t}"
            rep.factor_leak = t if 1 < t < N else None
            return rep
    for j in range(len(bases)):
        for k in range(j + 1, len(bases)):
            t = gcd(bases[j] - bases[k], N)
            if t != 1:
                rep.hypotheses_ok = False
                rep.failed_hypothesis = f"gcd({bases[j]} - {bases[k]}, N) = {t}"
                rep.factor_leak = t if 1 < t < N else None
                return rep
    d = len(bases)
    linear = [ModPoly((-b, 1), N) for b in bases]
    rep.brute_force = nu_bruteforce(_product(linear, N), N, bound=bound).suitable_count
    rep.formula = d * p + d * q - 2 * d * d
    rep.vanishing_count = len(vanishing_points(linear, N, bound=bound))
    rep.vanishing_pairs = 4 * comb(d, 2)
    rep.holds = rep.brute_force == rep.formula
    return rep


@dataclass
class QuadTheoremReport:
    N: int
    p: int
    q: int
    bases: list[int]
    companion_bases: list[int]
    D: int
    brute_force: int
    formula: int
    holds: bool
    roots_mod_p: list[int] = field(default_factory=list)
    roots_mod_q: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def verify_quadratic_product_theorem(
    N: int, p: int, q: int, family: QuadFamily | tuple[int, int], *, bound: int = DEFAULT_BOUND
) -> QuadTheoremReport:
    """Brute-force nu of a quadratic family product against 2dp + 2dq - 8d^2.

    ``family`` may be a QuadFamily or a ``(b_start, d)`` pair, which is built
    (and possibly rejected) with :func:`quad_family`.
    """
    _check_semiprime(N, p, q)
    if not isinstance(family, QuadFamily):
        b_start, d = family
        family = quad_family(N, b_start, d)
    if family.target != N or family.d < 1:
        raise ValueError("family does not belong to N or is empty")
    # rebuild to re-check every hypothesis on a caller-supplied family
    quad_family(N, family.bases[0], family.d)
    d = family.d
    g = family.product()
    brute = nu_bruteforce(g, N, bound=bound).suitable_count
    formula = 2 * d * p + 2 * d * q - 8 * d * d
    return QuadTheoremReport(
        N=N,
        p=p,
        q=q,
        bases=list(family.bases),
        companion_bases=list(family.companion_bases),
        D=family.D,
        brute_force=brute,
        formula=formula,
        holds=brute == formula,
        roots_mod_p=[count_roots_mod(f.mod(N), p) for f in family.polys],
        roots_mod_q=[count_roots_mod(f.mod(N), q) for f in family.polys],
    )

