"""Algorithm 1: factoring with a product of digit polynomials.

Given bases B and evaluation points S (both of size d), the engine builds
g = prod f_b mod N with a product tree, evaluates g on S with a remainder
tree, and scans gcds. Parametrizations supply (B, S) so that some b_i is
congruent to some s_j modulo a prime factor of a composite N.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .digitpoly import DigitPoly, linear_digit_poly
from .ntcore import (
    FactorLeak,
    ceil_kth_root,
    gcd,
    integer_kth_root,
    is_prime_oracle,
    mod_inverse,
    perfect_power,
    trial_division,
)
from .polyring import SubproductTree, product_tree
from .polyring.counter import record_gcd

__all__ = [
    "Parametrization",
    "FactorOutcome",
    "FactorConfig",
    "InvariantBreach",
    "FACTOR",
    "PRIME_INDICATED",
    "EXHAUSTED",
    "STRASSEN_MIN_N",
    "run_algorithm1",
    "strassen_param",
    "multifactor_param",
    "hint_param",
    "hint_param_shifted",
    "verify_problem_solution",
    "factorize",
]

FACTOR = "Factor"
PRIME_INDICATED = "PrimeIndicated"
EXHAUSTED = "Exhausted"
STRASSEN_MIN_N = 30
DEFAULT_BLOCK = 1 << 16

DigitRule = Callable[[int, int], DigitPoly]


class InvariantBreach(RuntimeError):
    """A parametrization that must succeed came back Exhausted."""


@dataclass(frozen=True)
class Parametrization:
    modulus: int
    bases: tuple[int, ...]
    points: tuple[int, ...]
    digit_rule: DigitRule = linear_digit_poly
    label: str = "custom"

    def __post_init__(self):
        N = self.modulus
        if N < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(self, "bases", tuple(self.bases))
        object.__setattr__(self, "points", tuple(self.points))
        if not self.bases or len(self.bases) != len(self.points):
            raise ValueError("B and S must be non-empty and of equal size")
        for v in self.bases + self.points:
            if not 0 <= v < N:
                raise ValueError(f"{v} is not a residue mod {N}")
        sb, ss = set(self.bases), set(self.points)
        if len(sb) != len(self.bases) or len(ss) != len(self.points):
            raise ValueError("elements of B and of S must be pairwise distinct")
        if sb & ss:
            raise ValueError("B and S must be disjoint")

    @property
    def d(self) -> int:
        return len(self.bases)


@dataclass
class FactorOutcome:
    kind: str
    N: int
    d: int
    factor: int | None = None
    cofactor: int | None = None
    step: int | None = None
    indices: tuple[int, int | None] | None = None
    gcd_scans: dict = field(default_factory=lambda: {"G": 0, "H": 0})
    diagnostics: dict = field(default_factory=dict)
    label: str = "custom"

    @property
    def error_label(self) -> str | None:
        return {PRIME_INDICATED: "Error A", EXHAUSTED: "Error B"}.get(self.kind)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "error_label": self.error_label,
            "N": self.N,
            "d": self.d,
            "parametrization": self.label,
            "factor": self.factor,
            "cofactor": self.cofactor,
            "step": self.step,
            "indices": list(self.indices) if self.indices else None,
            "gcd_scans": dict(self.gcd_scans),
            "diagnostics": dict(self.diagnostics),
        }


def _factor(N, P, g, step, j, i, scans) -> FactorOutcome:
    return FactorOutcome(FACTOR, N, P.d, g, N // g, step, (j, i), scans, label=P.label)


def run_algorithm1(N: int, P: Parametrization, *, block_size: int = DEFAULT_BLOCK) -> FactorOutcome:
    """One pass of Algorithm 1 with 1-based indices in the outcome.

    Steps 3-4 scan G_j = gcd(g(s_j), N) for j = 1, 2, ...; the first
    G_j = N hands over to Steps 5-6, which scan H_i = gcd(f_{b_i}(s_j), N)
    and never return to the j-scan. Points are evaluated in chunks of
    ``block_size`` so that only one remainder tree is alive at a time.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if P.modulus != N:
        raise ValueError("parametrization belongs to a different modulus")
    if block_size < 1:
        raise ValueError("block size must be positive")
    d = P.d
    polys = [P.digit_rule(N, b) for b in P.bases]
    for f, b in zip(polys, P.bases):
        if f.target != N or f.base % N != b:
            raise ValueError(f"digit rule produced a polynomial for the wrong base {b}")
    # Step 1
    g = product_tree([f.mod(N) for f in polys]).root
    scans = {"G": 0, "H": 0}
    # Steps 2-4, blockwise over S
    for lo in range(0, d, block_size):
        chunk = P.points[lo : lo + block_size]
        ys = SubproductTree(chunk, N).evaluate(g)
        for off, y in enumerate(ys):
            j = lo + off
            G = gcd(y, N)
            scans["G"] += 1
            record_gcd()
            if G == 1:
                continue
            if G < N:
                return _factor(N, P, G, 4, j + 1, None, scans)
            # Steps 5-6
            s = P.points[j]
            for i in range(d):
                H = gcd(polys[i].mod(N)(s), N)
                scans["H"] += 1
                record_gcd()
                if 1 < H < N:
                    return _factor(N, P, H, 6, j + 1, i + 1, scans)
            return FactorOutcome(
                EXHAUSTED,
                N,
                d,
                indices=(j + 1, None),
                gcd_scans=scans,
                diagnostics={"unscanned_j": list(range(j + 2, d + 1))},
                label=P.label,
            )
    return FactorOutcome(PRIME_INDICATED, N, d, gcd_scans=scans, label=P.label)


# -- parametrizations --------------------------------------------------------


def _grid(N: int, d: int, label: str) -> Parametrization:
    return Parametrization(
        N,
        tuple(N - n for n in range(1, d + 1)),
        tuple((n - 1) * d for n in range(1, d + 1)),
        label=label,
    )


def strassen_param(N: int) -> Parametrization:
    """B = {-1, ..., -d}, S = {0, d, ..., (d-1)d} with d = ceil(N^(1/4))."""
    if N < STRASSEN_MIN_N:
        raise ValueError(f"Strassen sets need N >= {STRASSEN_MIN_N}")
    return _grid(N, ceil_kth_root(N, 4), "strassen")


def multifactor_param(N: int, m: int) -> Parametrization:
    """The Strassen grid with d = floor(N^(1/(2m))).

    Covers differences 1..d^2, enough when N has a prime factor at most d^2.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    d = integer_kth_root(N, 2 * m)
    if d < 1:
        raise ValueError("d = 0 for this N and m")
    if d * (d - 1) >= N - d:
        raise ValueError("grid does not fit in Z_N for this N and m")
    return _grid(N, d, f"multifactor({m})")


def hint_d(b: int, m: int) -> int:
    """ceil(sqrt(b/m)), computed as ceil(sqrt(ceil(b/m)))."""
    return ceil_kth_root(-(-b // m), 2)


def _check_hint(N: int, m: int, r: int, b: int) -> None:
    if m < 2:
        raise ValueError("hint needs m >= 2")
    if not 0 <= r < m:
        raise ValueError("hint needs 0 <= r < m")
    if b < 1 or 5 * b > N:
        raise ValueError("hint needs 1 <= b <= N/5")


def hint_param(N: int, m: int, r: int, b: int) -> Parametrization:
    """B = {m d n + r}, S = {m n} for n = 1..d, d = ceil(sqrt(b/m)).

    Meant for a prime factor p < b with p = r mod m and m < p.
    """
    _check_hint(N, m, r, b)
    d = hint_d(b, m)
    return Parametrization(
        N,
        tuple(m * d * n + r for n in range(1, d + 1)),
        tuple(m * n for n in range(1, d + 1)),
        label=f"hint({m},{r},{b})",
    )


def hint_param_shifted(N: int, m: int, r: int, b: int) -> Parametrization:
    """B = {m^-1 r - n}, S = {-d n} mod N; raises FactorLeak if gcd(m, N) > 1."""
    _check_hint(N, m, r, b)
    inv = mod_inverse(m, N)
    if inv is None:
        t = gcd(m, N)
        if t < N:
            raise FactorLeak(t, N, "m is not invertible")
        raise ValueError("m is divisible by N")
    d = hint_d(b, m)
    c = inv * r % N
    return Parametrization(
        N,
        tuple((c - n) % N for n in range(1, d + 1)),
        tuple((-d * n) % N for n in range(1, d + 1)),
        label=f"hint_shifted({m},{r},{b})",
    )


def verify_problem_solution(
    B: Sequence[int], S: Sequence[int], N: int, known_factors: Sequence[int]
) -> bool:
    """B, S disjoint in Z_N and b = s mod p for some pair and prime p | N."""
    Bn = {b % N for b in B}
    Sn = {s % N for s in S}
    if Bn & Sn:
        return False
    for p in set(known_factors):
        if p < 2 or N % p or p == N:
            continue
        if {b % p for b in Bn} & {s % p for s in Sn}:
            return True
    return False


# -- complete factorization --------------------------------------------------


@dataclass
class FactorConfig:
    trial_bound: int = 1000
    block_size: int = DEFAULT_BLOCK
    hint: tuple[int, int, int] | None = None
    multifactor_m: int | None = None
    d_override: int | None = None


def _override_param(N: int, d: int) -> Parametrization:
    if d < 1 or d * (d - 1) >= N - d:
        raise ValueError("d override does not fit in Z_N")
    return _grid(N, d, f"override({d})")


def _candidate_params(N: int, cfg: FactorConfig) -> list[Parametrization]:
    out = []
    builders = []
    if cfg.hint is not None:
        builders.append(lambda: hint_param(N, *cfg.hint))
    if cfg.multifactor_m is not None:
        builders.append(lambda: multifactor_param(N, cfg.multifactor_m))
    if cfg.d_override is not None:
        builders.append(lambda: _override_param(N, cfg.d_override))
    for build in builders:
        try:
            out.append(build())
        except ValueError:
            pass
    out.append(strassen_param(N))
    return out


def _split(N: int, cfg: FactorConfig, log: list) -> int:
    """A nontrivial divisor of the composite N (N >= 30, no perfect power)."""
    for P in _candidate_params(N, cfg):
        try:
            out = run_algorithm1(N, P, block_size=cfg.block_size)
        except FactorLeak as leak:
            log.append({"N": N, "parametrization": P.label, "kind": "FactorLeak", "factor": leak.factor})
            return leak.factor
        log.append(out.to_dict())
        if out.kind == FACTOR:
            return out.factor
        if P.label == "strassen":
            raise InvariantBreach(f"Strassen parametrization returned {out.kind} for composite {N}")
    raise InvariantBreach(f"no parametrization split {N}")  # pragma: no cover


def factorize(N: int, config: FactorConfig | None = None, *, log: list | None = None) -> list[tuple[int, int]]:
    """Sorted list of (prime, exponent) with product N.

    Small primes go by trial division, perfect powers by integer roots, and
    every other composite cofactor is split with Algorithm 1 and recursed on.
    """
    cfg = config or FactorConfig()
    if N < 1:
        raise ValueError("N must be positive")
    log = [] if log is None else log
    small, rest = trial_division(N, max(cfg.trial_bound, 1))
    primes: Counter[int] = Counter(small)
    stack = [(rest, 1)] if rest > 1 else []
    while stack:
        n, mult = stack.pop()
        if is_prime_oracle(n):
            primes[n] += mult
            continue
        pp = perfect_power(n)
        if pp is not None:
            stack.append((pp[0], mult * pp[1]))
            continue
        if n < STRASSEN_MIN_N:
            for p in trial_division(n, n)[0]:
                primes[p] += mult
            continue
        a = _split(n, cfg, log)
        stack += [(a, mult), (n // a, mult)]
    result = sorted(primes.items())
    check = 1
    for p, e in result:
        check *= p**e
    if check != N:  # pragma: no cover
        raise InvariantBreach(f"factorization of {N} does not multiply back")
    return result
