import random
import threading

import pytest
from hypothesis import given, settings, strategies as st

from digitfactor.ntcore import FactorLeak
from digitfactor.polyring import (
    NEG_INF,
    ModPoly,
    OpCounter,
    SubproductTree,
    eval_horner,
    mul_cutoff,
    multipoint_eval,
    poly_divrem,
    poly_mul,
    product_tree,
    schoolbook_only,
    series_inverse,
)

from oracles import poly_eval, poly_mul_naive

G91 = ModPoly([24, 50, 35, 10, 1], 91)


def lin(c, N):
    return ModPoly([c, 1], N)


def test_modpoly_normalisation():
    f = ModPoly([91, 92, 0, 0], 91)
    assert f.coeffs == (0, 1)
    z = ModPoly.zero(91)
    assert z.coeffs == () and z.degree == NEG_INF and z.is_zero()
    assert ModPoly([0, 0], 5).degree == NEG_INF
    assert ModPoly([-1], 7).coeffs == (6,)
    with pytest.raises(ValueError):
        ModPoly([1], 1)
    with pytest.raises(AttributeError):
        f.modulus = 3


def test_str():
    assert str(G91) == "X^4 + 10*X^3 + 35*X^2 + 50*X + 24"
    assert str(ModPoly.zero(5)) == "0"


def test_mul_examples():
    assert poly_mul(lin(1, 91), lin(2, 91)) == ModPoly([2, 3, 1], 91)
    assert poly_mul(lin(1, 91), ModPoly.zero(91)).is_zero()
    assert poly_mul(lin(76, 77), lin(75, 77)) == ModPoly([2, 74, 1], 77)
    assert (76 * 75) % 77 == 2 and (76 + 75) % 77 == 74
    with pytest.raises(ValueError):
        poly_mul(lin(1, 91), lin(1, 77))


def test_degree_can_drop_over_composite_modulus():
    # 7X * 11X = 77X^2 = 0 mod 77
    assert poly_mul(ModPoly([0, 7], 77), ModPoly([0, 11], 77)).is_zero()


@pytest.mark.parametrize("N", [97, 10**9 + 7, 999999937 * 3, 2**61 - 1, 2**64 + 13, 3**130])
def test_mul_random_vs_schoolbook(N):
    rng = random.Random(N)
    for _ in range(12):
        a = [rng.randrange(N) for _ in range(rng.randint(1, 200))]
        b = [rng.randrange(N) for _ in range(rng.randint(1, 200))]
        assert poly_mul(ModPoly(a, N), ModPoly(b, N)).coeffs == tuple(poly_mul_naive(a, b, N))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 10**9),
    st.lists(st.integers(0, 10**12), min_size=0, max_size=65),
    st.lists(st.integers(0, 10**12), min_size=0, max_size=65),
)
def test_mul_property(N, a, b):
    with mul_cutoff(4):
        got = poly_mul(ModPoly(a, N), ModPoly(b, N))
    assert got.coeffs == tuple(poly_mul_naive([x % N for x in a], [x % N for x in b], N))


def test_squaring_and_karatsuba_fallback():
    rng = random.Random(3)
    N = 2**4000 + 7  # too wide for the transform prime pool at this length
    a = [rng.randrange(N) for _ in range(70)]
    f = ModPoly(a, N)
    assert (f * f).coeffs == tuple(poly_mul_naive(a, a, N))


def test_product_tree_examples():
    t = product_tree([lin(c, 91) for c in (1, 2, 3, 4)])
    assert t.root == G91
    assert t.height == 2 and len(t.leaves) == 4
    f = ModPoly([3, 1, 4], 91)
    assert product_tree([f]).root == f
    assert product_tree([lin(76, 77), lin(75, 77)]).root == ModPoly([2, 74, 1], 77)
    with pytest.raises(ValueError):
        product_tree([])
    with pytest.raises(ValueError):
        product_tree([lin(1, 91), lin(1, 77)])


def test_product_tree_structure_and_fold():
    rng = random.Random(5)
    for N in (101, 10**9 + 9, 2**127 - 1):
        for d in (1, 2, 3, 7, 64, 128, 129):
            leaves = [lin(rng.randrange(N), N) for _ in range(d)]
            t = product_tree(leaves)
            fold = ModPoly.constant(1, N)
            for f in leaves:
                fold = ModPoly(poly_mul_naive(fold.coeffs, f.coeffs, N), N)
            assert t.root == fold
            for lo, hi in zip(t.levels, t.levels[1:]):
                for k in range(len(lo) // 2):
                    assert hi[k] == ModPoly(poly_mul_naive(lo[2 * k].coeffs, lo[2 * k + 1].coeffs, N), N)
                if len(lo) % 2:
                    assert hi[-1] == lo[-1]


def test_product_tree_non_monic_leaves():
    N = 1009
    leaves = [ModPoly([3, 5], N), ModPoly([1, 2, 7], N), ModPoly([4], N)]
    want = [1]
    for f in leaves:
        want = poly_mul_naive(want, f.coeffs, N)
    assert product_tree(leaves).root.coeffs == tuple(want)


def test_divrem_examples():
    q, r = poly_divrem(ModPoly([2, 3, 1], 91), lin(1, 91))
    assert q == lin(2, 91) and r.is_zero()
    q, r = poly_divrem(G91, ModPoly([2, 3, 1], 91))
    assert q == ModPoly([12, 7, 1], 91) and r.is_zero()
    # remainder theorem
    f = ModPoly([5, 0, 3, 8, 1], 91)
    for s in range(10):
        _, r = poly_divrem(f, ModPoly([-s, 1], 91))
        assert r.coeffs == ((eval_horner(f, s),) if eval_horner(f, s) else ())


def test_divrem_errors():
    with pytest.raises(ZeroDivisionError):
        poly_divrem(G91, ModPoly.zero(91))
    with pytest.raises(FactorLeak) as e:
        poly_divrem(G91, ModPoly([1, 7], 91))
    assert e.value.factor == 7


@pytest.mark.parametrize("N", [97, 10**9 + 7, 91 * 10**12 + 1, 2**89 - 1])
def test_divrem_reconstruction(N):
    rng = random.Random(N % 1000)
    for df, dg in [(0, 3), (5, 5), (40, 10), (300, 100), (300, 299), (500, 37)]:
        f = ModPoly([rng.randrange(N) for _ in range(df + 1)], N)
        g = ModPoly([rng.randrange(N) for _ in range(dg)] + [rng.choice([1, 3, 5])], N)
        q, r = poly_divrem(f, g)
        assert q * g + r == f
        assert r.degree < g.degree


def test_series_inverse():
    N = 10**9 + 7
    rng = random.Random(1)
    f = ModPoly([1] + [rng.randrange(N) for _ in range(200)], N)
    h = series_inverse(f, 150)
    prod = poly_mul_naive(f.coeffs, h.coeffs, N)[:150]
    assert prod == [1] + [0] * 149
    with pytest.raises(FactorLeak):
        series_inverse(ModPoly([7, 1], 91), 4)


def test_horner_examples():
    assert eval_horner(ModPoly([1, 9], 91), 10) == 0
    assert eval_horner(ModPoly.zero(91), 5) == 0
    assert eval_horner(G91, 4) == 42 == 5 * 6 * 7 * 8 % 91


def test_multipoint_worked_example():
    # 9*10*11*12 = 11880 = 50 mod 91 and 13*14*15*16 = 43680 = 0 mod 91
    want = [poly_eval(G91.coeffs, s, 91) for s in (0, 4, 8, 12)]
    assert want == [24, 42, 50, 0]
    assert multipoint_eval(G91, [0, 4, 8, 12]) == want


def test_multipoint_trivial_cases():
    f = ModPoly([3, 1, 4, 1, 5], 1009)
    assert multipoint_eval(f, [17]) == [eval_horner(f, 17)]
    assert multipoint_eval(ModPoly.constant(9, 1009), [1, 2, 3]) == [9, 9, 9]
    assert multipoint_eval(ModPoly.zero(1009), [1, 2]) == [0, 0]
    with pytest.raises(ValueError):
        multipoint_eval(f, [])
    with pytest.raises(ValueError):
        multipoint_eval(f, [1009])


@pytest.mark.parametrize("N", [257, 10**9 + 7, 2**61 - 1, 2**64 + 13, 10**60 + 7])
def test_multipoint_random(N):
    rng = random.Random(N % 997)
    for deg, npts in [(0, 5), (3, 1), (10, 7), (256, 256), (255, 200), (600, 256), (31, 33)]:
        f = ModPoly([rng.randrange(N) for _ in range(deg + 1)], N)
        pts = rng.sample(range(min(N, 10**6)), npts)
        assert multipoint_eval(f, pts) == [eval_horner(f, s) for s in pts]


def test_subproduct_tree_reuse():
    N = 10**9 + 7
    rng = random.Random(9)
    pts = rng.sample(range(N), 300)
    tree = SubproductTree(pts, N)
    for _ in range(3):
        f = ModPoly([rng.randrange(N) for _ in range(rng.randint(1, 400))], N)
        assert tree.evaluate(f) == [eval_horner(f, s) for s in pts]
    assert tree.as_product_tree().root == tree.root


def test_repeated_points_and_schoolbook_control_agree():
    N = 1000003
    pts = [5, 5, 7, 1, 0, 7] * 20
    f = ModPoly(range(1, 150), N)
    fast = multipoint_eval(f, pts)
    with schoolbook_only():
        slow = multipoint_eval(f, pts)
    assert fast == slow == [eval_horner(f, s) for s in pts]


def test_counter_and_cutoff():
    N = 2**61 - 1
    f = ModPoly(range(1, 300), N)
    with OpCounter() as fast:
        f * f
    with schoolbook_only(), OpCounter() as slow:
        f * f
    assert slow.mul == 299 * 299
    assert 0 < fast.mul < slow.mul
    with pytest.raises(ValueError):
        with mul_cutoff(0):
            pass


def test_counter_nesting_and_threads():
    N = 10**9 + 7
    f = ModPoly(range(1, 10), N)
    with OpCounter() as outer:
        with OpCounter() as inner:
            f * f
        assert inner.mul == outer.mul == 81
    # counters are per context: another thread does not inherit the block
    seen = []
    with OpCounter() as c:
        t = threading.Thread(target=lambda: seen.append((f * f).degree))
        t.start()
        t.join()
    assert c.mul == 0 and seen == [16]


def test_scaling_is_subquadratic():
    N = 2**61 - 1
    rng = random.Random(2)
    counts = []
    for d in (256, 512):
        leaves = [lin(rng.randrange(N), N) for _ in range(d)]
        pts = [rng.randrange(N) for _ in range(d)]
        with OpCounter() as ops:
            SubproductTree(pts, N).evaluate(product_tree(leaves).root)
        counts.append(ops.mul)
    assert counts[1] / counts[0] <= 2.8


def test_product_tree_with_zero_products():
    N = 77
    leaves = [ModPoly([0, 7], N), ModPoly([0, 11], N), lin(1, N), lin(2, N), ModPoly.zero(N)]
    t = product_tree(leaves)
    assert t.root.is_zero()
    assert t.levels[1][0].is_zero()
    assert product_tree([ModPoly.zero(N)] * 4).root.is_zero()
