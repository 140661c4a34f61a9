import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kkreals.digits import DigitStream, decode, format_stream
from kkreals.errors import BudgetExhausted, NotInRange
from kkreals.exact import Interval, dyadic, embed_nat
from kkreals.kk import enum_X
from kkreals.embeddings import (
    LITERAL,
    PARTITION,
    RealFn1,
    affine_fn,
    dist_interval,
    dist_to_nat,
    effective_weights,
    embed_nat_S,
    lift,
    mu_interval,
    mu_point,
    mu_table,
    pi1,
    pi1_S,
    pi2,
    pi2_S,
    pi_inv0,
    pi_inv1,
    table_sum,
)

from support import FN1, FN2, g_catalogue, random_table_fn

F = Fraction
HALF, THIRD = F(1, 2), F(1, 3)
reals = st.fractions(min_value=-5, max_value=12, max_denominator=90)


def brute_case2(Fn, g_at, weights):
    """Sum of weight_n * E_n with E_n a full sum over X^1_n (no support pruning)."""
    total = F(0)
    for n, w in enumerate(weights):
        if w == 0:
            continue
        e = F(0)
        for a in enum_X(1, n):
            p = F(1)
            for b in range(n + 1):
                p *= mu_point(min(F(n), g_at(b)))[a.table[b]]
            e += p * Fn(a)
        total += w * e
    return total


@pytest.mark.parametrize(
    "x, row",
    [
        (F(-37, 10), {0: 1}),
        (F(2), {2: 1}),
        (HALF, {0: HALF, 1: HALF}),
        (F(7, 3), {2: 1}),
        (F(8, 3), {3: 1}),
        (F(5, 2), {2: HALF, 3: HALF}),
        (F(0), {0: 1}),
    ],
)
def test_mu_point_examples(x, row):
    assert mu_point(x).entries == row


@given(reals)
def test_mu_point_is_distribution(x):
    row = mu_point(x)
    assert row.total() == 1
    assert len(row.support()) <= 2
    assert all(w > 0 for w in row.entries.values())


@pytest.mark.parametrize("n", range(0, 6))
def test_mu_point_boundaries_agree(n):
    # at n + 1/3 the middle clause has y = 0, at n + 2/3 it has y = 1
    for x, k in ((n + THIRD, n), (n + 2 * THIRD, n + 1)):
        y = 3 * (x - n) - 1
        middle = {n: 1 - y, n + 1: y}
        assert mu_point(x).entries == {j: w for j, w in middle.items() if w}
        assert mu_point(x).entries == {k: 1}


@settings(max_examples=200)
@given(reals, reals)
def test_mu_interval_encloses_points(a, b):
    lo, hi = min(a, b), max(a, b)
    box = mu_interval(Interval(lo, hi))
    for t in (F(0), F(1, 4), HALF, F(3, 4), F(1)):
        x = lo + t * (hi - lo)
        for k, w in mu_point(x).entries.items():
            assert w in box[k]


@pytest.mark.parametrize(
    "y, d",
    [(F(5, 2), HALF), (F(3), 0), (F(1, 4), F(1, 4)), (F(-1, 3), THIRD), (F(9, 4), F(1, 4))],
)
def test_dist_examples(y, d):
    assert dist_interval(Interval.point(y)) == Interval.point(d)


def test_dist_to_nat_examples():
    for n in range(6):
        assert dist_to_nat(affine_fn(1, HALF), n, 20) == Interval.point(HALF)
        assert dist_to_nat(affine_fn(1, 0), n, 20) == Interval.point(0)
    assert dist_to_nat(affine_fn(1, F(1, 4)), 0, 20) == Interval.point(F(1, 4))


def test_dist_to_nat_lifted_width():
    g = lift(affine_fn(THIRD, 0))
    enc = dist_to_nat(g, 2, 20)
    assert F(1, 3) in enc and enc.width <= dyadic(20)


def test_effective_weights_examples():
    pts = lambda ws: [w.lo for w in ws]
    assert pts(effective_weights([HALF] * 4)) == [HALF, HALF, 0, 0]
    assert pts(effective_weights([HALF] * 4, LITERAL)) == [HALF, HALF, 0, 0]
    assert pts(effective_weights([F(2, 5)] * 3)) == [F(2, 5), F(2, 5), F(1, 5)]
    assert pts(effective_weights([F(2, 5)] * 3, LITERAL)) == [F(2, 5), F(2, 5), F(2, 25)]
    assert pts(effective_weights([0] * 5)) == [0] * 5


@settings(max_examples=100)
@given(st.lists(st.fractions(min_value=0, max_value=HALF, max_denominator=20), min_size=1, max_size=8),
       st.fractions(min_value=0, max_value=F(1, 20), max_denominator=100))
def test_effective_weights_enclose_points(ds, eps):
    boxes = [Interval(max(F(0), d - eps), d) for d in ds]
    for mode in (PARTITION, LITERAL):
        encl = effective_weights(boxes, mode)
        for shrink in (F(0), eps):
            points = [max(F(0), d - shrink) for d in ds]
            exact = effective_weights(points, mode)
            for e, box in zip(exact, encl):
                assert e.lo in box
    exact = effective_weights(ds)
    if sum(ds) >= 1:
        assert sum(w.lo for w in exact) == 1


def test_mu_table_examples():
    assert mu_table(0, affine_fn(1, HALF), 20) == {0: Interval.point(1)}
    t = mu_table(1, affine_fn(1, HALF), 20)
    # order (0,0), (0,1), (1,0), (1,1): a(1) = 1 forced, a(0) split evenly
    assert [t[i].lo for i in range(4)] == [0, HALF, 0, HALF]


@pytest.mark.parametrize("name", sorted(g_catalogue()))
def test_mu_table_matches_product_oracle(name):
    g = g_catalogue()[name]
    if isinstance(g, RealFn1):
        at = lambda b: g(Interval.point(b)).lo
        for n in range(3):
            t = mu_table(n, g, 20)
            for idx, a in enumerate(enum_X(1, n)):
                w = F(1)
                for b in range(n + 1):
                    w *= mu_point(min(F(n), at(b)))[a.table[b]]
                assert t[idx] == Interval.point(w)
    for n in range(3):
        s = table_sum(mu_table(n, g, 20))
        assert 1 in s and s.width <= dyadic(20)


@pytest.mark.parametrize(
    "f, x, value",
    [(FN1["square"], F(5, 2), F(13, 2)), (FN1["succ"], F(-2), F(1)), (FN1["id"], F(7), F(7)),
     (FN1["table"], F(3, 2), F(5, 2)), (FN1["table"], F(7, 4), F(15, 4))],
)
def test_pi1_examples(f, x, value):
    assert pi1(f)(Interval.point(x)) == Interval.point(value)


@given(st.integers(0, 2**32), st.integers(0, 20))
def test_pi1_at_naturals(seed, a):
    f = random_table_fn(random.Random(seed))
    assert pi1(f)(embed_nat(a).query(20), 20) == Interval.point(f(a))


@given(st.integers(0, 2**32), reals, reals)
def test_pi1_interval_encloses_points(seed, a, b):
    f = random_table_fn(random.Random(seed), max_key=12)
    lo, hi = min(a, b), max(a, b)
    box = pi1(f)(Interval(lo, hi))
    for t in (F(0), F(1, 3), HALF, F(1)):
        x = lo + t * (hi - lo)
        assert pi1(f)(Interval.point(x)).lo in box


def test_pi2_case1_example():
    assert pi2(FN2["f(3)"], pi1(FN1["succ"]), 20) == Interval.point(4)


def test_pi2_case2_example_both_modes():
    g = affine_fn(1, HALF)
    oracle = brute_case2(lambda a: a.table[0], lambda b: b + HALF, [HALF, HALF])
    assert oracle == F(1, 4)
    for mode in (PARTITION, LITERAL):
        enc = pi2(FN2["f(0)"], g, 20, mode)
        assert oracle in enc and enc.width <= dyadic(20)


def test_pi2_constant_is_exact_in_partition_mode():
    g = affine_fn(1, HALF)
    assert 7 in pi2(FN2["const7"], g, 20)
    # with d = 2/5 everywhere the literal weights only add up to 22/25
    g = affine_fn(1, F(2, 5))
    assert 7 in pi2(FN2["const7"], g, 20, PARTITION)
    assert F(154, 25) in pi2(FN2["const7"], g, 20, LITERAL)


@pytest.mark.parametrize("shift", [F(2, 5), F(1, 2), F(3, 7)])
@pytest.mark.parametrize("Fname", ["f(0)", "f(0)+f(1)", "if"])
def test_pi2_case2_matches_brute_force(shift, Fname):
    Fn = FN2[Fname]
    g = affine_fn(1, shift)
    ds = []
    while sum(ds) < 1:
        ds.append(min(shift, 1 - shift))
    weights = [w.lo for w in effective_weights(ds)]
    oracle = brute_case2(lambda a: Fn(a), lambda b: b + shift, weights)
    enc = pi2(Fn, g, 20)
    assert oracle in enc and enc.width <= dyadic(20)


def test_pi2_result_in_convex_hull():
    # a weighted average can only land between the extreme values of F
    g = affine_fn(1, HALF)
    Fn = FN2["f(0)+f(1)"]
    vals = [Fn(a) for n in range(2) for a in enum_X(1, n)]
    enc = pi2(Fn, g, 20)
    assert min(vals) <= enc.lo and enc.hi <= max(vals)


def test_pi2_case1_with_interval_samples():
    g = lift(pi1(FN1["succ"]))
    assert 4 in pi2(FN2["f(3)"], g, 12)


def test_pi2_budget_diagnostic():
    # literal mode has no Case-1 route, and d = 0 never builds mass
    with pytest.raises(BudgetExhausted) as info:
        pi2(FN2["f(0)"], pi1(FN1["succ"]), 10, LITERAL, budget=300)
    assert "case2_mass_lower_bound" in info.value.diagnostic


def test_pi2_rejects_unknown_mode():
    with pytest.raises(ValueError):
        pi2(FN2["f(0)"], affine_fn(), 4, "other")


@pytest.mark.parametrize(
    "v, n",
    [(Interval(F(29, 10), F(31, 10)), 3), (Interval(F(2, 5), F(3, 5)), None),
     (Interval.point(THIRD), None), (Interval.point(0), 0), (Interval.point(F(-1, 5)), 0), (Interval.point(F(-1, 2)), None)],
)
def test_pi_inv0_examples(v, n):
    assert pi_inv0(v) == n


@given(st.integers(0, 2**32))
def test_pi_inv1_round_trip(seed):
    f = random_table_fn(random.Random(seed))
    inv = pi_inv1(pi1(f))
    assert [inv(a) for a in range(21)] == [f(a) for a in range(21)]


def test_pi_inv1_identity_and_outside():
    inv = pi_inv1(affine_fn())
    assert [inv(a) for a in range(21)] == list(range(21))
    out = pi_inv1(affine_fn(1, HALF))
    for a in range(21):
        with pytest.raises(NotInRange):
            out(a)


def test_pi_inv1_undecided_reports_budget():
    # sqrt-style enclosures that straddle n + 1/3 forever
    g = RealFn1(lambda x, p: Interval.around(x.lo + THIRD, dyadic(p + 1)))
    with pytest.raises(BudgetExhausted):
        pi_inv1(g, budget=12)(2)


def test_intensional_examples():
    s = pi2_S(FN2["f(3)"], pi1_S(FN1["succ"]))
    assert format_stream(s, 20) == "4:" + " ".join(["0"] * 20)
    s = pi2_S(FN2["f(0)"], lift(affine_fn(1, HALF)))
    assert F(1, 4) in decode(s, 16)
    x = pi1_S(FN1["id"])(embed_nat_S(7))
    assert 7 in decode(x, 30)


def test_intensional_agrees_with_extensional():
    g = affine_fn(1, F(2, 5))
    Fn = FN2["f(0)+f(1)"]
    s = pi2_S(Fn, lift(g))
    for p in (4, 10, 16):
        assert decode(s, p).intersects(pi2(Fn, g, p))


def test_embed_nat_S():
    assert format_stream(embed_nat_S(3), 4) == "3:0 0 0 0"
    with pytest.raises(ValueError):
        embed_nat_S(-1)


def test_digit_fn_on_prefix():
    g = lift(affine_fn(1, F(1, 4)))
    s = g.on_prefix(DigitStream.integer(2).prefix(12), 4)
    assert s.head is not None and len(s.digits) <= 4
    assert F(9, 4) in Interval.around(s.value(), dyadic(len(s.digits)))
