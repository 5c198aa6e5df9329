"""Dense univariate polynomials over Z_N.

Coefficients are stored in ascending degree order, always reduced into
[0, N) and with no trailing zeros; the zero polynomial has no coefficients.
The ``_raw`` helpers work on plain lists of reduced ints and are what the
tree algorithms call directly.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..ntcore import FactorLeak, gcd, mod_inverse
from . import _ntt
from .counter import get_cutoff, record_mul

NEG_INF = float("-inf")


class ModPoly:
    """Immutable polynomial with coefficients in Z_N."""

    __slots__ = ("modulus", "coeffs")

    def __init__(self, coeffs: Iterable[int], modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        c = [int(a) % modulus for a in coeffs]
        _strip(c)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def _from_reduced(cls, coeffs: list[int], modulus: int) -> "ModPoly":
        _strip(coeffs)
        obj = cls.__new__(cls)
        object.__setattr__(obj, "modulus", modulus)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("ModPoly is immutable")

    @classmethod
    def zero(cls, modulus: int) -> "ModPoly":
        return cls((), modulus)

    @classmethod
    def constant(cls, c: int, modulus: int) -> "ModPoly":
        return cls((c,), modulus)

    @classmethod
    def x(cls, modulus: int) -> "ModPoly":
        return cls((0, 1), modulus)

    @property
    def degree(self) -> int | float:
        """Degree, or ``NEG_INF`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModPoly):
            return NotImplemented
        return self.modulus == other.modulus and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.modulus, self.coeffs))

    def __repr__(self) -> str:
        return f"ModPoly({list(self.coeffs)}, {self.modulus})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)

    def _check(self, other: "ModPoly") -> None:
        if not isinstance(other, ModPoly):
            raise TypeError("expected ModPoly")
        if other.modulus != self.modulus:
            raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __add__(self, other: "ModPoly") -> "ModPoly":
        self._check(other)
        return ModPoly._from_reduced(_add_raw(self.coeffs, other.coeffs, self.modulus), self.modulus)

    def __sub__(self, other: "ModPoly") -> "ModPoly":
        self._check(other)
        return ModPoly._from_reduced(_sub_raw(self.coeffs, other.coeffs, self.modulus), self.modulus)

    def __neg__(self) -> "ModPoly":
        N = self.modulus
        return ModPoly._from_reduced([(-c) % N for c in self.coeffs], N)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return poly_mul(self, other)

    __rmul__ = __mul__

    def scale(self, c: int) -> "ModPoly":
        N = self.modulus
        c %= N
        record_mul(len(self.coeffs))
        return ModPoly._from_reduced([a * c % N for a in self.coeffs], N)

    def __divmod__(self, other: "ModPoly"):
        return poly_divrem(self, other)

    def __floordiv__(self, other: "ModPoly") -> "ModPoly":
        return poly_divrem(self, other)[0]

    def __mod__(self, other: "ModPoly") -> "ModPoly":
        return poly_divrem(self, other)[1]

    def __call__(self, x: int) -> int:
        return eval_horner(self, x)

    def monic(self) -> "ModPoly":
        inv = mod_inverse(self.lc, self.modulus)
        if inv is None:
            raise FactorLeak(gcd(self.lc, self.modulus), self.modulus, "leading coefficient")
        return self.scale(inv)


def _strip(c: list[int]) -> None:
    while c and not c[-1]:
        c.pop()


def _add_raw(a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        s = out[i] + v
        out[i] = s - N if s >= N else s
    return out


def _sub_raw(a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, v in enumerate(b):
        s = out[i] - v
        out[i] = s + N if s < 0 else s
    return out


# -- multiplication ---------------------------------------------------------


def _schoolbook(a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    la, lb = len(a), len(b)
    if la < lb:
        a, b, la, lb = b, a, lb, la
    out = [0] * (la + lb - 1)
    for j, bj in enumerate(b):
        if bj:
            for i, ai in enumerate(a):
                out[i + j] += ai * bj
    record_mul(la * lb)
    return [c % N for c in out]


def _karatsuba(a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    """Fallback when the NTT prime pool cannot cover the coefficient bound."""
    n = max(len(a), len(b))
    if min(len(a), len(b)) < get_cutoff() or n < 2:
        return _schoolbook(a, b, N)
    h = n // 2
    a0, a1 = list(a[:h]), list(a[h:])
    b0, b1 = list(b[:h]), list(b[h:])
    z0 = _mul_raw(a0, b0, N) if a0 and b0 else []
    z2 = _mul_raw(a1, b1, N) if a1 and b1 else []
    sa, sb = _add_raw(a0, a1, N), _add_raw(b0, b1, N)
    z1 = _sub_raw(_sub_raw(_mul_raw(sa, sb, N), z0, N), z2, N)
    out = [0] * (len(a) + len(b) - 1)
    for off, part in ((0, z0), (h, z1), (2 * h, z2)):
        for i, v in enumerate(part):
            if v:
                out[off + i] = (out[off + i] + v) % N
    return out


def _ntt_mul(a: Sequence[int], b: Sequence[int], N: int) -> list[int] | None:
    n_out = len(a) + len(b) - 1
    L = _ntt.next_pow2(n_out)
    if L > _ntt.MAX_LEN:
        return None
    basis = _ntt.basis_for(min(len(a), len(b)) * (N - 1) ** 2)
    if basis is None:
        return None
    if a is b:
        fa = basis.forward(basis.residues([a], L, N))
        prod = basis.pointwise(fa, fa)
    else:
        fa = basis.forward(basis.residues([a], L, N))
        fb = basis.forward(basis.residues([b], L, N))
        prod = basis.pointwise(fa, fb)
    res = basis.inverse(prod)[:, 0, :n_out]
    return basis.reconstruct(res, N)


def _mul_raw(a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    """Product of reduced coefficient lists (result not normalised)."""
    if not a or not b:
        return []
    if min(len(a), len(b)) < get_cutoff():
        return _schoolbook(a, b, N)
    out = _ntt_mul(a, b, N)
    if out is None:
        out = _karatsuba(a, b, N)
    return out


def poly_mul(f: ModPoly, g: ModPoly) -> ModPoly:
    """f*g mod N: schoolbook below the cutoff, NTT convolution above it."""
    f._check(g)
    return ModPoly._from_reduced(_mul_raw(f.coeffs, g.coeffs, f.modulus), f.modulus)


# -- inversion and division -------------------------------------------------


def _series_inverse_raw(a: Sequence[int], n: int, N: int) -> list[int]:
    """h with a*h = 1 mod X^n; a[0] must be a unit mod N."""
    inv0 = mod_inverse(a[0] % N, N) if a else None
    if inv0 is None:
        raise FactorLeak(gcd(a[0] if a else 0, N), N, "constant term not invertible")
    h = [inv0]
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        e = _mul_raw(list(a[:prec]), h, N)[:prec]
        # h <- h * (2 - e)
        e = [(-c) % N for c in e]
        e[0] = (e[0] + 2) % N if e else 2 % N
        h = _mul_raw(h, e, N)[:prec]
    return h + [0] * (n - len(h))


def series_inverse(f: ModPoly, n: int) -> ModPoly:
    """Power-series inverse of f modulo X^n by Newton iteration."""
    if n < 1:
        raise ValueError("precision must be positive")
    return ModPoly._from_reduced(_series_inverse_raw(f.coeffs, n, f.modulus), f.modulus)


def _divrem_classical(f: list[int], g: Sequence[int], ginv: int, N: int):
    r = list(f)
    dg = len(g) - 1
    q = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = r[i] * ginv % N
        q[i - dg] = c
        if c:
            base = i - dg
            for j in range(dg):
                r[base + j] = (r[base + j] - c * g[j]) % N
            r[i] = 0
    record_mul(len(q) * (dg + 1))
    return q, r[:dg]


def _divrem_newton(f: list[int], g: Sequence[int], ginv: int, N: int):
    dg = len(g) - 1
    m = len(f) - 1 - dg
    if ginv != 1:
        g = [c * ginv % N for c in g]
        record_mul(len(g))
    rev_g = list(reversed(g))
    inv = _series_inverse_raw(rev_g, m + 1, N)
    rev_f = list(reversed(f))[: m + 1]
    q_rev = _mul_raw(rev_f, inv, N)[: m + 1]
    q_rev += [0] * (m + 1 - len(q_rev))
    q = list(reversed(q_rev))
    qg = _mul_raw(q, list(g), N)
    r = _sub_raw(f[:dg], qg[:dg], N)
    if ginv != 1:
        # f = q*(g/lc) + r  =>  quotient w.r.t. the original g is q/lc
        q = [c * ginv % N for c in q]
        record_mul(len(q))
    return q, r


def poly_divrem(f: ModPoly, g: ModPoly) -> tuple[ModPoly, ModPoly]:
    """Quotient and remainder with f = q*g + r and deg r < deg g.

    Raises FactorLeak when lc(g) is not a unit mod N.
    """
    f._check(g)
    N = f.modulus
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    ginv = mod_inverse(g.lc, N)
    if ginv is None:
        raise FactorLeak(gcd(g.lc, N), N, "leading coefficient of divisor")
    q, r = _divrem_raw(list(f.coeffs), g.coeffs, ginv, N)
    return ModPoly._from_reduced(q, N), ModPoly._from_reduced(r, N)


def _divrem_raw(f: list[int], g: Sequence[int], ginv: int, N: int):
    dg = len(g) - 1
    if len(f) <= dg:
        return [], list(f)
    m = len(f) - 1 - dg
    if min(m + 1, dg) < get_cutoff():
        return _divrem_classical(f, g, ginv, N)
    return _divrem_newton(f, g, ginv, N)


def eval_horner(f: ModPoly, x: int) -> int:
    """f(x) mod N by Horner's rule."""
    N = f.modulus
    x %= N
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * x + c) % N
    record_mul(len(f.coeffs))
    return acc
