"""Product trees and remainder-tree multipoint evaluation.

Trees are built level by level; all pairs on a level that share a shape are
multiplied in one batched transform. For monic nodes the leading 1 is split
off before convolving, so a node of degree 2^k needs a length-2^k transform.
When the tree is kept for evaluation, the transforms of each node's stripped
children are cached and reused by the descent.

The descent is a scaled remainder tree: each node carries the first deg(M_v)
coefficients of (f mod M_v) / M_v as a series in 1/X, stored reversed. A
child's vector is a middle product of its parent's vector with its sibling,
and at a leaf X - s the single stored value is f(s).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _ntt
from .core import (
    ModPoly,
    _divrem_raw,
    _mul_raw,
    _schoolbook,
    _series_inverse_raw,
    _strip,
    _sub_raw,
)
from .counter import get_cutoff, record_mul


@dataclass
class _Group:
    """Consecutive pairs on one level multiplied together."""

    start: int
    stop: int
    basis: _ntt.Basis | None = None
    L: int = 0
    FA: np.ndarray | None = None  # transforms of stripped left children
    FB: np.ndarray | None = None  # transforms of stripped right children


def _pair_key(a: list[int], b: list[int]) -> tuple[int, int, bool]:
    return len(a), len(b), bool(a) and bool(b) and a[-1] == 1 and b[-1] == 1


def _multiply_monic_group(As, Bs, N: int, capture: bool, group: _Group) -> list[list[int]]:
    da, db = len(As[0]) - 1, len(Bs[0]) - 1
    n = da + db
    if min(da, db) < get_cutoff():
        rows = []
        for a, b in zip(As, Bs):
            row = _schoolbook(a[:da], b[:db], N) + [0, 1]
            for t in range(da):
                row[db + t] += a[t]
            for t in range(db):
                row[da + t] += b[t]
            rows.append([c % N for c in row[:n]] + [1])
        return rows
    L = _ntt.next_pow2(n)
    basis = _ntt.basis_for(max(da, db) * (N - 1) ** 2 + 2 * (N - 1))
    if basis is None or L > _ntt.MAX_LEN:
        return [_mul_raw(a, b, N) for a, b in zip(As, Bs)]
    RA = basis.residues([a[:da] for a in As], L, N)
    RB = basis.residues([b[:db] for b in Bs], L, N)
    FA = basis.forward(RA.copy())
    FB = basis.forward(RB.copy())
    out = basis.inverse(basis.pointwise(FA, FB))[:, :, :n]
    out[:, :, db:n] = basis.add(out[:, :, db:n], RA[:, :, :da])
    out[:, :, da:n] = basis.add(out[:, :, da:n], RB[:, :, :db])
    flat = basis.reconstruct(np.ascontiguousarray(out).reshape(basis.k, -1), N)
    if capture:
        group.basis, group.L, group.FA, group.FB = basis, L, FA, FB
    return [flat[i * n : (i + 1) * n] + [1] for i in range(len(As))]


def _build_levels(leaves: list[list[int]], N: int, capture: bool):
    levels = [leaves]
    plans: list[list[_Group]] = []
    cur = leaves
    while len(cur) > 1:
        npairs = len(cur) // 2
        nxt: list[list[int]] = []
        groups: list[_Group] = []
        i = 0
        while i < npairs:
            key = _pair_key(cur[2 * i], cur[2 * i + 1])
            j = i + 1
            while j < npairs and _pair_key(cur[2 * j], cur[2 * j + 1]) == key:
                j += 1
            group = _Group(i, j)
            As, Bs = cur[2 * i : 2 * j : 2], cur[2 * i + 1 : 2 * j : 2]
            if key[2] and key[0] >= 2 and key[1] >= 2:
                rows = _multiply_monic_group(As, Bs, N, capture, group)
            else:
                rows = [_mul_raw(a, b, N) for a, b in zip(As, Bs)]
            for r in rows:
                _strip(r)
            nxt.extend(rows)
            groups.append(group)
            i = j
        if len(cur) % 2:
            nxt.append(cur[-1])
        levels.append(nxt)
        plans.append(groups)
        cur = nxt
    return levels, plans


def _check_same_modulus(polys: Sequence[ModPoly]) -> int:
    if not polys:
        raise ValueError("product tree needs at least one leaf")
    N = polys[0].modulus
    for p in polys:
        if p.modulus != N:
            raise ValueError("all leaves must share a modulus")
    return N


class ProductTree:
    """``levels[0]`` are the leaves, ``levels[-1] == [root]``.

    Each internal node is the product mod N of its two children; an odd node
    at the end of a level is carried up unchanged.
    """

    def __init__(self, levels: list[list[ModPoly]]):
        self.levels = levels

    @property
    def root(self) -> ModPoly:
        return self.levels[-1][0]

    @property
    def leaves(self) -> list[ModPoly]:
        return self.levels[0]

    @property
    def height(self) -> int:
        return len(self.levels) - 1


def product_tree(leaves: Sequence[ModPoly]) -> ProductTree:
    N = _check_same_modulus(leaves)
    raw_leaves = [list(f.coeffs) or [0] for f in leaves]
    raw_levels, _ = _build_levels(raw_leaves, N, capture=False)
    return ProductTree(
        [[ModPoly._from_reduced(list(r), N) for r in level] for level in raw_levels]
    )


class SubproductTree:
    """Product tree of the linear factors X - s, kept for repeated evaluation.

    Evaluating several polynomials at the same points reuses the tree, its
    cached transforms and the series inverse of the reversed root.
    """

    def __init__(self, points: Sequence[int], modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        if not points:
            raise ValueError("need at least one evaluation point")
        for s in points:
            if not 0 <= s < modulus:
                raise ValueError(f"point {s} outside Z_{modulus}")
        self.modulus = modulus
        self.points = tuple(points)
        leaves = [[(-s) % modulus, 1] for s in self.points]
        self._levels, self._plans = _build_levels(leaves, modulus, capture=True)
        self._root_inv: list[int] | None = None

    @property
    def root(self) -> ModPoly:
        return ModPoly._from_reduced(list(self._levels[-1][0]), self.modulus)

    def as_product_tree(self) -> ProductTree:
        N = self.modulus
        return ProductTree([[ModPoly._from_reduced(list(r), N) for r in lv] for lv in self._levels])

    def _root_inverse(self) -> list[int]:
        if self._root_inv is None:
            root = self._levels[-1][0]
            n = len(root) - 1
            self._root_inv = _series_inverse_raw(root[::-1], n, self.modulus)
        return self._root_inv

    def evaluate(self, f: ModPoly) -> list[int]:
        """[f(s) mod N for s in points]."""
        N = self.modulus
        if f.modulus != N:
            raise ValueError("modulus mismatch")
        root = self._levels[-1][0]
        n = len(root) - 1
        r = list(f.coeffs)
        if len(r) == n + 1:
            lc = r[-1]
            r = _sub_raw(r[:n], [c * lc % N for c in root[:n]], N)
            record_mul(n)
        elif len(r) > n + 1:
            _, r = _divrem_raw(r, root, 1, N)
        if not any(r):
            return [0] * len(self.points)
        rho = [0] * (n - len(r)) + r[::-1]
        prod = _mul_raw(rho, self._root_inverse(), N)[:n]
        prod += [0] * (n - len(prod))
        values: list[list[int]] = [prod[::-1]]
        for t in range(len(self._plans) - 1, -1, -1):
            values = self._descend(t, values)
        return [v[0] for v in values]

    def _descend(self, t: int, parents: list[list[int]]) -> list[list[int]]:
        N = self.modulus
        children = self._levels[t]
        out: list[list[int] | None] = [None] * len(children)
        for g in self._plans[t]:
            Cs = parents[g.start : g.stop]
            if g.FA is not None:
                self._descend_ntt(g, Cs, children, out)
                continue
            for p, C in zip(range(g.start, g.stop), Cs):
                ml, mr = children[2 * p], children[2 * p + 1]
                nl, nr = len(ml) - 1, len(mr) - 1
                nv = nl + nr
                out[2 * p] = _pad(_mul_raw(C, mr, N)[nr:nv], nl)
                out[2 * p + 1] = _pad(_mul_raw(C, ml, N)[nl:nv], nr)
        if len(children) % 2:
            out[-1] = parents[-1]
        return out  # type: ignore[return-value]

    def _descend_ntt(self, g: _Group, Cs, children, out) -> None:
        N = self.modulus
        basis = g.basis
        da = len(children[2 * g.start]) - 1
        db = len(children[2 * g.start + 1]) - 1
        nv = da + db
        RC = basis.residues(Cs, g.L, N)
        FC = basis.forward(RC.copy())
        left = basis.inverse(basis.pointwise(FC, g.FB))
        left = basis.add(left[:, :, db:nv], RC[:, :, :da])
        right = basis.inverse(basis.pointwise(FC, g.FA))
        right = basis.add(right[:, :, da:nv], RC[:, :, :db])
        lflat = basis.reconstruct(np.ascontiguousarray(left).reshape(basis.k, -1), N)
        rflat = basis.reconstruct(np.ascontiguousarray(right).reshape(basis.k, -1), N)
        for i, p in enumerate(range(g.start, g.stop)):
            out[2 * p] = lflat[i * da : (i + 1) * da]
            out[2 * p + 1] = rflat[i * db : (i + 1) * db]


def _pad(row: list[int], n: int) -> list[int]:
    return row + [0] * (n - len(row)) if len(row) < n else row


def multipoint_eval(f: ModPoly, points: Sequence[int]) -> list[int]:
    """Values f(s) mod N at every point, via a remainder tree."""
    return SubproductTree(points, f.modulus).evaluate(f)
