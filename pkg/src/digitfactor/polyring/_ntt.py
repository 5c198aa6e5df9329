"""Batched number-theoretic transforms over several word-size primes.

Exact integer convolutions of residues mod N are computed modulo enough
primes p = c*2^22 + 1 < 2^31 that their product exceeds the largest possible
coefficient, then recombined with Garner's algorithm and reduced mod N.
Arrays have shape (k, B, L): k primes, B independent rows, length L.
Products of two residues fit in uint64 because every prime is below 2^31.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..ntcore import is_prime_oracle, trial_division
from .counter import record_mul

MAX_LOG = 22
MAX_LEN = 1 << MAX_LOG
_U64 = np.uint64


def _find_primes() -> tuple[int, ...]:
    found = []
    for c in range(((1 << 31) - 2) >> MAX_LOG, 0, -1):
        p = (c << MAX_LOG) + 1
        if is_prime_oracle(p):
            found.append(p)
    return tuple(found)


def _primitive_root(p: int) -> int:
    small, rest = trial_division(p - 1, 1000)
    assert rest == 1
    factors = set(small)
    g = 2
    while any(pow(g, (p - 1) // f, p) == 1 for f in factors):
        g += 1
    return g


PRIMES = _find_primes()
_ROOT = {p: _primitive_root(p) for p in PRIMES}


def next_pow2(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


class Basis:
    """A set of NTT primes whose product exceeds a coefficient bound."""

    def __init__(self, primes: tuple[int, ...]):
        self.primes = primes
        self.k = len(primes)
        self.P = np.array(primes, dtype=_U64)
        self.product = 1
        self.prefix = []  # p_0 * ... * p_{j-1}
        for p in primes:
            self.prefix.append(self.product)
            self.product *= p
        # _garner[j][i] = p_j^{-1} mod p_i for j < i
        self._garner = [
            [pow(primes[j], -1, primes[i]) if j < i else 0 for i in range(self.k)]
            for j in range(self.k)
        ]
        self._slot = (self.product.bit_length() // 64 + 1) * 8

    def col(self, ndim: int = 3) -> np.ndarray:
        return self.P.reshape((self.k,) + (1,) * (ndim - 1))

    # -- conversion --------------------------------------------------------

    def residues(self, rows, L: int, N: int) -> np.ndarray:
        """Residues of zero-padded integer rows, shape (k, len(rows), L)."""
        B = len(rows)
        if N < (1 << 63):
            buf = np.zeros((B, L), dtype=_U64)
            for i, r in enumerate(rows):
                if r:
                    buf[i, : len(r)] = r
            if N <= min(self.primes):
                return np.broadcast_to(buf, (self.k, B, L)).copy()
            return buf[None, :, :] % self.col()
        width = ((N.bit_length() + 15) // 16) * 2
        pad = bytes(width)
        chunks = []
        for r in rows:
            chunks.extend(c.to_bytes(width, "little") for c in r)
            chunks.append(pad * (L - len(r)))
        limbs = np.frombuffer(b"".join(chunks), dtype="<u2").reshape(B * L, width // 2)
        acc = np.zeros((self.k, B * L), dtype=_U64)
        for j in range(width // 2):
            w = np.array([pow(2, 16 * j, p) for p in self.primes], dtype=_U64)
            acc += limbs[:, j].astype(_U64)[None, :] * w[:, None]
            if j % 64 == 63:
                acc %= self.col(2)
        acc %= self.col(2)
        return acc.reshape(self.k, B, L)

    def reconstruct(self, res: np.ndarray, N: int) -> list[int]:
        """Integers mod N from residues of shape (k, M); exact CRT lift first."""
        k = self.k
        P = self.primes
        digits = []
        for i in range(k):
            t = res[i].astype(_U64, copy=True)
            pi = _U64(P[i])
            for j in range(i):
                vj = digits[j] % pi if P[j] > P[i] else digits[j]
                t = (t + pi - vj) % pi * _U64(self._garner[j][i]) % pi
            digits.append(t)
        record_mul(res.shape[1] * k * (k - 1) // 2)
        M = res.shape[1]
        if N < (1 << 31):
            acc = np.zeros(M, dtype=_U64)
            n64 = _U64(N)
            for j in range(k):
                acc = (acc + digits[j] % n64 * _U64(self.prefix[j] % N)) % n64
            record_mul(M * k)
            return acc.tolist()
        slot = self._slot
        total = 0
        buf = np.zeros((M, slot // 8), dtype=_U64)
        for j in range(k):
            buf[:, 0] = digits[j]
            total += int.from_bytes(buf.tobytes(), "little") * self.prefix[j]
        record_mul(M * k)
        raw = total.to_bytes(M * slot, "little")
        fb = int.from_bytes
        return [fb(raw[i : i + slot], "little") % N for i in range(0, M * slot, slot)]

    # -- transforms --------------------------------------------------------

    def forward(self, a: np.ndarray) -> np.ndarray:
        """Decimation-in-frequency NTT; output in bit-reversed order."""
        a = np.ascontiguousarray(a)
        k, B, L = a.shape
        W, _, _ = _tables(self.primes, L)
        P = self.col(4)
        length = L
        while length >= 2:
            half = length >> 1
            x = a.reshape(k, B, L // length, 2, half)
            u = x[:, :, :, 0, :]
            v = x[:, :, :, 1, :]
            w = W[:, :: L // length][:, None, None, :]
            s = u + v
            s = np.minimum(s, s - P)
            t = (u + P - v) * w % P
            x[:, :, :, 0, :] = s
            x[:, :, :, 1, :] = t
            length = half
        record_mul(k * B * (L // 2) * max(L.bit_length() - 1, 0))
        return a

    def inverse(self, a: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`forward`, including the 1/L scaling."""
        a = np.ascontiguousarray(a)
        k, B, L = a.shape
        _, Winv, Linv = _tables(self.primes, L)
        P = self.col(4)
        length = 2
        while length <= L:
            half = length >> 1
            x = a.reshape(k, B, L // length, 2, half)
            u = x[:, :, :, 0, :]
            w = Winv[:, :: L // length][:, None, None, :]
            v = x[:, :, :, 1, :] * w % P
            s = u + v
            s = np.minimum(s, s - P)
            t = u + P - v
            t = np.minimum(t, t - P)
            x[:, :, :, 0, :] = s
            x[:, :, :, 1, :] = t
            length <<= 1
        a *= Linv[:, None, None]
        a %= self.col()
        record_mul(k * B * (L // 2) * max(L.bit_length() - 1, 0) + a.size)
        return a

    def pointwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = a * b
        out %= self.col(a.ndim)
        record_mul(out.size)
        return out

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        s = a + b
        return np.minimum(s, s - self.col(a.ndim))


@lru_cache(maxsize=64)
def _tables(primes: tuple[int, ...], L: int):
    """Twiddles w_L^j and w_L^-j for j < L/2, plus L^-1, per prime."""
    if L > MAX_LEN:
        raise ValueError("transform length exceeds supported maximum")
    half = max(L // 2, 1)
    W = np.empty((len(primes), half), dtype=_U64)
    Winv = np.empty((len(primes), half), dtype=_U64)
    Linv = np.empty(len(primes), dtype=_U64)
    for i, p in enumerate(primes):
        w = pow(_ROOT[p], (p - 1) // L, p) if L > 1 else 1
        for table, root in ((W, w), (Winv, pow(w, -1, p))):
            row = table[i]
            row[0] = 1
            filled = 1
            step = root
            while filled < half:
                n = min(filled, half - filled)
                row[filled : filled + n] = row[:n] * _U64(step) % _U64(p)
                filled += n
                step = step * step % p
        Linv[i] = pow(L, -1, p)
    return W, Winv, Linv


@lru_cache(maxsize=256)
def basis_for(bound: int) -> Basis | None:
    """Smallest prefix of PRIMES whose product exceeds bound, or None."""
    chosen = []
    prod = 1
    for p in PRIMES:
        chosen.append(p)
        prod *= p
        if prod > bound:
            return Basis(tuple(chosen))
    return None
