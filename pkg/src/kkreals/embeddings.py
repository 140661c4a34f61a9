"""Embedding type-1 and type-2 functionals into the real hierarchies.

``pi1`` turns ``f: N -> N`` into the piecewise-linear real function through
the points ``(n, f(n))`` (constant ``f(0)`` left of 0).  ``pi2`` sends a
type-2 functional ``F`` and a real function ``g`` to a real:

* if ``g`` sends every natural to a natural, the answer is ``F(f_g)`` where
  ``f_g(n) = g(n)``;
* otherwise the answer is a weighted average of ``F`` over the finite
  approximation sets, the weights coming from how far ``g(n)`` is from the
  naturals.

The first case cannot be recognised in finite time.  ``pi2`` therefore
returns enclosures that are valid in both cases: a certificate that ``g``
lands within 1/3 of naturals on the arguments ``F`` reads bounds the answer
by ``F(f_g)`` plus the (computable) weighted error of the first few terms.

The general recursion replaces ``X^1_n`` by ``X^{k-1}_n`` and ``{0..n}`` by
``X^{k-2}_n``; it is only instantiated here for k <= 2.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import ceil, floor
from typing import Callable, Iterable, Union

from .digits import DigitSeq, DigitStream, decode, from_intervals, normalize
from .errors import BudgetExhausted, NotInRange
from .exact import Interval, IntervalStream, dyadic, embed_nat, imin, rational
from .kk import ApproxElem, TotalFn1, TotalFn2, enum_X

PARTITION = "partition"
LITERAL = "literal"
MODES = (PARTITION, LITERAL)

DEFAULT_BUDGET = 200_000
THIRD = Fraction(1, 3)


class RealFn1:
    """A total real function, applied to interval enclosures.

    ``fn(x, p)`` must enclose the image of every point of ``x``; ``p`` is a
    precision hint for functions that can only approximate.
    """

    def __init__(self, fn: Callable[[Interval, int], Interval], name: str = None):
        self._fn = fn
        self.name = name

    def __call__(self, x: Interval, p: int = 0) -> Interval:
        return self._fn(x, p)

    def shifted(self, t) -> RealFn1:
        t = rational(t)
        return RealFn1(lambda x, p: self(x, p) + t, name=f"{self.name}+{t}")

    def __repr__(self):
        return f"RealFn1({self.name or self._fn!r})"


def affine_fn(slope=1, offset=0) -> RealFn1:
    """The pointwise real function ``x -> slope * x + offset``."""
    slope, offset = rational(slope), rational(offset)
    return RealFn1(lambda x, p: x * slope + offset, name=f"{slope}*x+{offset}")


class WeightRow:
    """A probability distribution on the naturals with exact weights."""

    def __init__(self, entries: dict):
        self.entries = {k: rational(v) for k, v in entries.items() if v != 0}

    def __getitem__(self, k) -> Fraction:
        return self.entries.get(k, Fraction(0))

    def support(self):
        return sorted(self.entries)

    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, WeightRow) and self.entries == other.entries

    def __repr__(self):
        return f"WeightRow({ {k: str(v) for k, v in sorted(self.entries.items())} })"


def mu_point(x) -> WeightRow:
    """The distribution a real induces on the naturals.

    Mass 1 on 0 for ``x <= 0`` and on ``n`` within 1/3 of ``n``; between
    ``n + 1/3`` and ``n + 2/3`` the mass moves linearly from ``n`` to ``n + 1``.
    """
    x = rational(x)
    if x <= 0:
        return WeightRow({0: 1})
    n = floor(x)
    frac = x - n
    if frac <= THIRD:
        return WeightRow({n: 1})
    if frac >= 2 * THIRD:
        return WeightRow({n + 1: 1})
    y = 3 * frac - 1
    return WeightRow({n: 1 - y, n + 1: y})


def _mu_breakpoints(k):
    if k == 0:
        return (THIRD, 2 * THIRD)
    return (k - 2 * THIRD, k - THIRD, k + THIRD, k + 2 * THIRD)


def mu_interval(x: Interval) -> dict:
    """Weight enclosures of :func:`mu_point` over every point of ``x``.

    Returns ``{k: Interval}`` for the naturals that may carry mass.
    """
    if x.is_point():
        return {k: Interval.point(v) for k, v in mu_point(x.lo).entries.items()}
    out = {}
    for k in range(max(0, floor(x.lo) - 1), max(0, ceil(x.hi) + 1) + 1):
        pts = [x.lo, x.hi] + [b for b in _mu_breakpoints(k) if x.lo < b < x.hi]
        vals = [mu_point(c)[k] for c in pts]
        if max(vals) > 0:
            out[k] = Interval(min(vals), max(vals))
    return out


def _dist_point(y: Fraction) -> Fraction:
    if y <= 0:
        return -y
    f = y - floor(y)
    return min(f, 1 - f)


def dist_interval(y: Interval) -> Interval:
    """Enclosure of the distance from a point of ``y`` to the naturals."""
    vals = [_dist_point(y.lo), _dist_point(y.hi)]
    start = max(0, floor(y.lo))
    if start < y.hi:
        for m in range(start, floor(y.hi) + 1):
            if y.lo < m < y.hi:
                vals.append(Fraction(0))
            if y.lo < m + Fraction(1, 2) < y.hi:
                vals.append(Fraction(1, 2))
    return Interval(min(vals), max(vals))


def _partition_weight(before: Interval, d: Interval) -> Interval:
    # min(d, max(0, 1 - before)): the last term is cut so the total is 1.
    return imin(d, (1 - before).clamp_below(0))


def _literal_weight(before: Interval, d: Interval) -> Interval:
    # d * z with z = 1 while the running sum stays <= 1, z = 0 once the sum
    # before this term exceeds 1, and z = 1 - before on the crossing term.
    s_lo, s_hi, d_lo, d_hi = before.lo, before.hi, d.lo, d.hi
    vals = []
    if s_lo + d_lo <= 1:
        vals += [d_lo, min(d_hi, 1 - s_lo)]
    if s_hi > 1:
        vals.append(Fraction(0))
    s_top = min(s_hi, Fraction(1))
    if s_lo <= 1 and s_top + d_hi > 1:
        vals.append(d_hi * min(1 - s_lo, d_hi))
        vals.append(max(d_lo, 1 - s_top) * (1 - s_top))
    return Interval(min(vals), max(vals))


_WEIGHT = {PARTITION: _partition_weight, LITERAL: _literal_weight}


def effective_weights(ds: Iterable, mode: str = PARTITION) -> list[Interval]:
    """Per-term weights from distance enclosures ``d(g, 0), d(g, 1), ...``.

    ``partition`` cuts the term where the running sum reaches 1, so the
    weights add up to exactly 1.  ``literal`` multiplies the crossing term's
    distance by the remaining mass, which can leave the total short of 1.
    """
    weight = _WEIGHT[mode]
    before = Interval.point(0)
    out = []
    for d in ds:
        d = d if isinstance(d, Interval) else Interval.point(d)
        out.append(weight(before, d))
        before = before + d
    return out


class _Work:
    def __init__(self, budget):
        self.budget = budget
        self.used = 0
        self.notes: dict = {}

    def tick(self, n=1):
        self.used += n
        if self.used > self.budget:
            raise BudgetExhausted(
                f"work budget {self.budget} exhausted; progress: {self.notes}",
                dict(self.notes),
            )


def _sampler(g, work: _Work = None):
    """``sample(n, q)``: enclosure of width ``<= 2**-q`` of ``g`` at the natural ``n``."""
    cache = {}
    if isinstance(g, DigitRealFn1):
        outs = {}

        def raw(n, q):
            if n not in outs:
                outs[n] = g(DigitStream.integer(n))
            return decode(outs[n], q)
    else:
        def raw(n, q):
            target = dyadic(q)
            for r in range(q, q + 64):
                enc = g(embed_nat(n).query(r), r)
                if enc.width <= target:
                    return enc
            raise BudgetExhausted(f"{g!r} did not reach width 2^-{q} at {n}")

    def sample(n, q):
        key = (n, q)
        if key not in cache:
            if work is not None:
                work.tick()
            cache[key] = raw(n, q)
        return cache[key]

    return sample


def dist_to_nat(g, n: int, p: int) -> Interval:
    """Enclosure of the distance from ``g(n)`` to the naturals, width ``<= 2**-p``."""
    return dist_interval(_sampler(g)(n, p))


def _rows(sample, n, q):
    return [mu_interval(sample(b, q).clamp_above(n)) for b in range(n + 1)]


def mu_table(n: int, g, p: int) -> dict:
    """Weight enclosure of every element of ``X^1_n`` (keyed by enumeration index).

    The weight of a table ``a`` is the product over ``b <= n`` of the mass
    ``mu_point(min(n, g(b)))`` puts on ``a(b)``.  Samples are refined until
    the enclosure of the total weight is at most ``2**-p`` wide.
    """
    sample = _sampler(g)
    elems = enum_X(1, n)
    zero = Interval.point(0)
    for q in range(p, p + 64):
        rows = _rows(sample, n, q)
        table = {}
        for idx, a in enumerate(elems):
            w = Interval.point(1)
            for b, row in enumerate(rows):
                w = w * row.get(a.table[b], zero)
            table[idx] = w
        if table_sum(table).width <= dyadic(p):
            return table
    raise BudgetExhausted(f"weights of X^1_{n} did not reach width 2^-{p}")


def table_sum(table: dict) -> Interval:
    total = Interval.point(0)
    for w in table.values():
        total = total + w
    return total


def _as_fn2(F) -> TotalFn2:
    return F if isinstance(F, TotalFn2) else TotalFn2(F)


def _expected(F: TotalFn2, n, rows, work: _Work) -> Interval:
    # Sum of F(a) * weight(a) over the support of the product distribution;
    # tables outside the support carry weight exactly 0.
    supports = [sorted(r.items()) for r in rows]
    acc = Interval.point(0)
    for choice in itertools.product(*supports):
        work.tick()
        table = tuple(k for k, _ in choice)
        w = Interval.point(1)
        for _, wk in choice:
            w = w * wk
        acc = acc + w * F(ApproxElem(1, n, table))
    return acc


def _case2(F, sample, q, horizon, mode, work):
    weight = _WEIGHT[mode]
    before = Interval.point(0)
    acc = Interval.point(0)
    for n in range(horizon + 1):
        d = dist_interval(sample(n, q))
        w = weight(before, d)
        if w.hi > 0:
            acc = acc + w * _expected(F, n, _rows(sample, n, q), work)
        before = before + d
        if before.lo >= 1:
            return acc
    work.notes["case2_mass_lower_bound"] = str(before.lo)
    work.notes["case2_terms"] = horizon + 1
    return None


class _NoCertificate(Exception):
    pass


def pi_inv0(v: Interval):
    """The natural ``n`` with ``v`` inside ``(n - 1/3, n + 1/3)``, else None."""
    n = floor(v.mid + Fraction(1, 2))
    if n >= 0 and v.inside_open(n - THIRD, n + THIRD):
        return n
    return None


def _outside_windows(v: Interval) -> bool:
    if v.hi <= -THIRD:
        return True
    n = floor(v.lo)
    return n >= 0 and n + THIRD <= v.lo and v.hi <= n + 2 * THIRD


def _case1(F: TotalFn2, sample, q, work):
    def oracle(m):
        c = pi_inv0(sample(m, q))
        if c is None:
            raise _NoCertificate(m)
        return c

    try:
        v, sigma = F.trace(oracle)
    except _NoCertificate as exc:
        work.notes["case1_blocked_at"] = exc.args[0]
        return None
    # Past n0 every table with positive weight agrees with sigma, so F is v there.
    n0 = max((max(k, c) for k, c in sigma.items()), default=0) + 1
    before = Interval.point(0)
    acc = Interval.point(0)
    for n in range(n0 + 1):
        d = dist_interval(sample(n, q))
        w = _partition_weight(before, d)
        if w.hi > 0:
            acc = acc + w * (_expected(F, n, _rows(sample, n, q), work) - v)
        before = before + d
    work.notes["case1_value"] = v
    return acc + v


def pi1(f) -> RealFn1:
    """Piecewise-linear interpolation of ``f`` through ``(n, f(n))``; ``f(0)`` left of 0."""

    def at(x: Fraction) -> Fraction:
        if x <= 0:
            return Fraction(f(0))
        n = floor(x)
        y = x - n
        return (1 - y) * f(n) + y * f(n + 1) if y else Fraction(f(n))

    def apply(x: Interval, p: int) -> Interval:
        pts = [x.lo, x.hi]
        pts += [Fraction(m) for m in range(max(0, ceil(x.lo)), floor(x.hi) + 1) if x.lo < m < x.hi]
        vals = [at(c) for c in pts]
        return Interval(min(vals), max(vals))

    return RealFn1(apply, name=f"pi1({getattr(f, 'name', None) or f!r})")


def pi2(F, g, p: int, mode: str = PARTITION, budget: int = DEFAULT_BUDGET) -> Interval:
    """Enclosure of width ``<= 2**-p`` of the embedded ``F`` applied to ``g``.

    ``g`` is a :class:`RealFn1` or a :class:`DigitRealFn1`.  Precision and
    the Case-2 horizon are raised together until one route certifies an
    answer; the Case-1 route is only sound for ``mode="partition"``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown weight mode {mode!r}")
    F = _as_fn2(F)
    work = _Work(budget)
    sample = _sampler(g, work)
    target = dyadic(p)
    q, horizon = p + 2, 4
    while True:
        if mode == PARTITION:
            res = _case1(F, sample, q, work)
            if res is not None and res.width <= target:
                return res
        res = _case2(F, sample, q, horizon, mode, work)
        if res is not None and res.width <= target:
            return res
        q += 2
        horizon *= 2


def pi_inv1(g, budget: int = 64):
    """Partial inverse of :func:`pi1`.

    The returned function maps ``a`` to the natural whose window contains
    ``g(a)``; it raises :class:`NotInRange` when ``g(a)`` provably misses
    every window and :class:`BudgetExhausted` when undecided after
    ``budget`` precision steps.
    """
    sample = _sampler(g)

    def inverse(a: int) -> int:
        for q in range(budget):
            enc = sample(a, q)
            n = pi_inv0(enc)
            if n is not None:
                return n
            if _outside_windows(enc):
                raise NotInRange(f"g({a}) lies in {enc}, outside every window")
        raise BudgetExhausted(f"g({a}) undecided after {budget} precision steps")

    return TotalFn1(inverse, name=f"pi_inv1({g!r})")


class _NeedMore(Exception):
    pass


class DigitRealFn1:
    """A total real function on signed-digit streams."""

    def __init__(self, fn: Callable[[DigitStream], DigitStream], name: str = None):
        self._fn = fn
        self.name = name

    def __call__(self, x: DigitStream) -> DigitStream:
        return self._fn(x)

    def on_prefix(self, s: DigitSeq, depth: int) -> DigitSeq:
        """The output digits (at most ``depth``) already forced by the compact ``s``."""
        if s.head is None:
            return DigitSeq()
        items = (s.head,) + s.digits

        def source():
            yield from items
            raise _NeedMore

        out = self._fn(DigitStream(source))
        got = []
        try:
            for item in out:
                got.append(item)
                if len(got) > depth:
                    break
        except (_NeedMore, RuntimeError):
            pass
        if not got:
            return DigitSeq()
        return DigitSeq(got[0], tuple(got[1 : depth + 1]))

    def __repr__(self):
        return f"DigitRealFn1({self.name or self._fn!r})"


def lift(g: RealFn1, max_extra: int = 256) -> DigitRealFn1:
    """Run an interval function on digit streams."""

    def fn(x: DigitStream) -> DigitStream:
        def producer(p):
            target = dyadic(p)
            for q in range(p, p + max_extra):
                enc = g(decode(x, q), q)
                if enc.width <= target:
                    return enc
            raise BudgetExhausted(f"{g!r} did not converge to width 2^-{p}")

        return from_intervals(IntervalStream(producer))

    return DigitRealFn1(fn, name=g.name)


def embed_nat_S(n: int) -> DigitStream:
    """The intensional representative ``n:0 0 0 ...`` of a natural."""
    if n < 0:
        raise ValueError("embed_nat_S expects a natural number")
    return DigitStream.integer(n)


def pi1_S(f) -> DigitRealFn1:
    return lift(pi1(f))


def pi2_S(F, x: Union[DigitRealFn1, RealFn1], mode: str = PARTITION,
          budget: int = DEFAULT_BUDGET) -> DigitStream:
    """Intensional counterpart of :func:`pi2`, normalised.

    Integer values come out literally as ``n:0 0 0 ...``; other values are
    the normalizer applied to the digit expansion of the weighted sum.
    """
    F = _as_fn2(F)
    value = IntervalStream(lambda p: pi2(F, x, p, mode, budget))
    return normalize(from_intervals(value))
