"""Closed rational intervals and precision-indexed interval streams.

A real number is presented as a function from a precision index ``p`` to a
closed rational interval of width at most ``2**-p`` containing it.  Answers
are nested: the interval returned at ``p + 1`` lies inside the one at ``p``.
All arithmetic is exact (``fractions.Fraction``); nothing here rounds.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

Rational = Fraction


def rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3/4"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use an exact rational")
    return Fraction(x)


def dyadic(p: int) -> Fraction:
    """``2**-p`` as an exact rational."""
    return Fraction(1, 1 << p) if p >= 0 else Fraction(1 << -p)


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", rational(self.lo))
        object.__setattr__(self, "hi", rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> Interval:
        x = rational(x)
        return cls(x, x)

    @classmethod
    def around(cls, x, radius) -> Interval:
        x, radius = rational(x), rational(radius)
        return cls(x - radius, x + radius)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        x = rational(x)
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.contains(x)

    def subset_of(self, other: Interval) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def inside_open(self, lo, hi) -> bool:
        """True when this interval lies in the open interval ``(lo, hi)``."""
        return lo < self.lo and self.hi < hi

    def intersects(self, other: Interval) -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    # Internal arithmetic used by the embeddings.  Not a general interval
    # library: only the monotone operations the constructions need.

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        other = rational(other)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo - other.hi, self.hi - other.lo)
        return self + (-rational(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Interval):
            corners = (
                self.lo * other.lo,
                self.lo * other.hi,
                self.hi * other.lo,
                self.hi * other.hi,
            )
            return Interval(min(corners), max(corners))
        c = rational(other)
        if c >= 0:
            return Interval(self.lo * c, self.hi * c)
        return Interval(self.hi * c, self.lo * c)

    __rmul__ = __mul__

    def clamp_above(self, bound) -> Interval:
        """Pointwise ``min(x, bound)``."""
        bound = rational(bound)
        return Interval(min(self.lo, bound), min(self.hi, bound))

    def clamp_below(self, bound) -> Interval:
        """Pointwise ``max(x, bound)``."""
        bound = rational(bound)
        return Interval(max(self.lo, bound), max(self.hi, bound))

    def __str__(self):
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


def imin(a: Interval, b: Interval) -> Interval:
    return Interval(min(a.lo, b.lo), min(a.hi, b.hi))


def imax(a: Interval, b: Interval) -> Interval:
    return Interval(max(a.lo, b.lo), max(a.hi, b.hi))


_INTERVAL_RE = re.compile(r"^\s*\[\s*([^,\]]+?)\s*,\s*([^,\]]+?)\s*\]\s*$")


def parse_interval(text: str) -> Interval:
    """Parse ``"[p/q, r/s]"``."""
    m = _INTERVAL_RE.match(text)
    if not m:
        raise ValueError(f"malformed interval {text!r}")
    return Interval(Fraction(m.group(1)), Fraction(m.group(2)))


def iv_meet(a: Interval, b: Interval) -> Optional[Interval]:
    """Intersection of two closed intervals, or None when they are disjoint."""
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:
        return None
    return Interval(lo, hi)


class IntervalStream:
    """A real given by its answers at every precision.

    ``producer(p)`` must return an interval of width ``<= 2**-p`` containing
    the represented real.  Answers are memoized and intersected with the
    previous answer, so callers always see a nested chain even when the
    producer is adaptive.
    """

    def __init__(self, producer: Callable[[int], Interval], label: str = None):
        self._producer = producer
        self._chain: list[Interval] = []
        self._lock = threading.Lock()
        self.label = label

    def query(self, p: int) -> Interval:
        if p < 0:
            raise ValueError("precision must be non-negative")
        with self._lock:
            while len(self._chain) <= p:
                q = len(self._chain)
                raw = self._producer(q)
                if raw.width > dyadic(q):
                    raise ValueError(
                        f"producer answered width {raw.width} at precision {q}"
                    )
                if self._chain:
                    met = iv_meet(raw, self._chain[-1])
                    if met is None:
                        raise ValueError(
                            f"producer answers at precision {q - 1} and {q} are disjoint"
                        )
                    raw = met
                self._chain.append(raw)
            return self._chain[p]

    def __repr__(self):
        return f"IntervalStream({self.label or self._producer!r})"


def stream_query(x: IntervalStream, p: int) -> Interval:
    return x.query(p)


def rational_stream(r) -> IntervalStream:
    """The exact stream of a rational: every answer is the point itself."""
    r = rational(r)
    point = Interval.point(r)
    return IntervalStream(lambda p: point, label=format_rational(r))


def embed_nat(n: int) -> IntervalStream:
    """The representative of a natural number in the interval domain."""
    if n < 0:
        raise ValueError("embed_nat expects a natural number")
    return rational_stream(n)


def format_prefix(x: IntervalStream, upto: int) -> str:
    """Render answers for ``p = 0..upto`` as ``"p=0:[..] p=1:[..] ..."``."""
    return " ".join(f"p={p}:{x.query(p)}" for p in range(upto + 1))


_PREFIX_ITEM_RE = re.compile(r"p=(\d+):(\[[^\]]*\])")


def parse_prefix(text: str) -> dict[int, Interval]:
    return {int(m.group(1)): parse_interval(m.group(2)) for m in _PREFIX_ITEM_RE.finditer(text)}
