"""Signed-digit reals.

A stream ``a : b1 b2 b3 ...`` with integer head ``a`` and digits in
``{-1, 0, 1}`` denotes ``a + sum(b_i * 2**-i)``.  Finite sequences are the
compact approximations; the values of all their infinite extensions fill
the closed interval returned by :func:`hull`.

Streams are lazy and memoized.  Several distinct streams denote the same
real, so equality is always checked by decoding, never by comparing digits.
"""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .exact import Interval, IntervalStream, dyadic, iv_meet, rational

DIGITS = (-1, 0, 1)
_GLYPH = {-1: "-", 0: "0", 1: "+"}
_PARSE_GLYPH = {"-": -1, "−": -1, "-1": -1, "0": 0, "+": 1, "1": 1, "+1": 1}


@dataclass(frozen=True)
class DigitSeq:
    """A compact: optional head and a finite tuple of digits.

    ``head=None`` is the empty sequence, which carries no digits.
    """

    head: Optional[int] = None
    digits: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(self.digits))
        if self.head is None and self.digits:
            raise ValueError("a sequence with digits needs a head")
        for d in self.digits:
            if d not in DIGITS:
                raise ValueError(f"digit {d!r} is not one of -1, 0, 1")

    @property
    def empty(self) -> bool:
        return self.head is None

    def value(self) -> Fraction:
        """Value of the finite sum, i.e. the centre of the hull."""
        if self.head is None:
            raise ValueError("empty compact has no value")
        v = Fraction(self.head)
        for i, d in enumerate(self.digits, 1):
            if d:
                v += d * dyadic(i)
        return v

    def extends(self, other: DigitSeq) -> bool:
        """True when ``self`` end-extends ``other``."""
        if other.head is None:
            return True
        return (
            self.head == other.head
            and self.digits[: len(other.digits)] == other.digits
        )

    def __str__(self):
        return format_seq(self)


class DigitStream:
    """An infinite signed-digit sequence.

    ``source`` is a zero-argument callable returning an iterator that yields
    the head and then the digits forever.  It is invoked once; the produced
    items are cached behind a lock so a stream can be shared freely.
    """

    def __init__(self, source: Callable[[], Iterator[int]], label: str = None):
        self._source = source
        self._it = None
        self._items: list[int] = []
        self._lock = threading.Lock()
        self.label = label

    def _get(self, i: int) -> int:
        with self._lock:
            if self._it is None:
                self._it = iter(self._source())
            while len(self._items) <= i:
                item = next(self._it)
                if len(self._items) > 0 and item not in DIGITS:
                    raise ValueError(f"stream produced non-digit {item!r}")
                self._items.append(item)
            return self._items[i]

    @property
    def head(self) -> int:
        return self._get(0)

    def digit(self, i: int) -> int:
        """The ``i``-th digit, counting from 1."""
        if i < 1:
            raise IndexError("digits are indexed from 1")
        return self._get(i)

    def prefix(self, n: int) -> DigitSeq:
        """Head and the first ``n`` digits."""
        self._get(n)
        with self._lock:
            return DigitSeq(self._items[0], tuple(self._items[1 : n + 1]))

    def __iter__(self):
        """Yields head, then digits."""
        for i in itertools.count():
            yield self._get(i)

    @classmethod
    def from_function(cls, head: int, digit: Callable[[int], int], label=None) -> DigitStream:
        def source():
            yield head
            for i in itertools.count(1):
                yield digit(i)

        return cls(source, label)

    @classmethod
    def periodic(cls, head: int, prefix: Sequence[int] = (), period: Sequence[int] = (0,)) -> DigitStream:
        prefix, period = tuple(prefix), tuple(period) or (0,)

        def source():
            yield head
            yield from prefix
            yield from itertools.cycle(period)

        return cls(source)

    @classmethod
    def integer(cls, n: int) -> DigitStream:
        return cls.periodic(n)

    def __repr__(self):
        return f"DigitStream({self.label or format_stream(self, 8)})"


def hull(s: DigitSeq) -> Interval:
    """Closed interval of values of all infinite extensions of ``s``."""
    if s.head is None:
        raise ValueError("empty compact has no hull")
    return Interval.around(s.value(), dyadic(len(s.digits)))


def decode(x: DigitStream, p: int) -> Interval:
    """Enclosure of width ``2**-p`` from the first ``p + 1`` digits."""
    if p < 0:
        raise ValueError("precision must be non-negative")
    return hull(x.prefix(p + 1))


def sim0(s: DigitSeq, t: DigitSeq) -> bool:
    """Consistency: some maximal extensions of ``s`` and ``t`` denote the same real."""
    return hull(s).intersects(hull(t))


def extend_total(s: DigitSeq) -> DigitStream:
    """Zero-padded total extension.  The empty compact becomes ``0:0 0 ...``."""
    if s.head is None:
        return DigitStream.integer(0)
    return DigitStream.periodic(s.head, s.digits, (0,))


def to_intervals(x: DigitStream) -> IntervalStream:
    return IntervalStream(lambda p: decode(x, p), label=x.label)


def _extract(x: IntervalStream, v: Fraction, k: int) -> Iterator[int]:
    # Invariant: the real lies in [v - 2^-k, v + 2^-k].  Each step queries an
    # enclosure of width <= 2^-(k+2) and picks a digit whose half-size hull
    # still covers it; 0 is preferred so exact dyadics get short expansions.
    while True:
        h = dyadic(k)
        enc = iv_meet(x.query(k + 2), Interval(v - h, v + h))
        if enc is None:
            raise ValueError("interval stream left the committed digit hull")
        half = h / 2
        if v - half <= enc.lo and enc.hi <= v + half:
            b = 0
        elif enc.hi <= v:
            b = -1
        else:
            b = 1
        v += b * half
        k += 1
        yield b


def from_intervals(x: IntervalStream) -> DigitStream:
    """Signed-digit stream of the real presented by ``x``."""

    def source():
        enc = x.query(1)
        a = floor(enc.mid + Fraction(1, 2))
        yield a
        yield from _extract(x, Fraction(a), 0)

    return DigitStream(source, label=x.label)


def _ceil_log2(q: Fraction) -> int:
    e = 0
    while Fraction(1 << e) < q:
        e += 1
    return e


def affine(c, terms: Iterable[tuple]) -> DigitStream:
    """Stream of ``c + sum(coeff * value(x))`` over ``(coeff, x)`` terms."""
    c = rational(c)
    terms = [(rational(k), x) for k, x in terms]
    scale = sum(abs(k) for k, _ in terms)
    extra = _ceil_log2(scale) if scale > 1 else 0

    def producer(p):
        q = p + extra
        acc = Interval.point(c)
        for k, x in terms:
            acc = acc + decode(x, q) * k
        return acc

    return from_intervals(IntervalStream(producer))


def _in_open(enc: Interval, lo: Fraction, hi: Fraction) -> bool:
    return enc.inside_open(lo, hi)


def normalize(x: DigitStream) -> DigitStream:
    """Value-preserving rewrite that sends every integer ``n`` to ``n:0 0 0 ...``.

    Reads ``x`` one prefix at a time.  A real strictly between ``n + 1/3`` and
    ``n + 2/3`` is passed through unchanged; a real near ``n`` gets head ``n``
    and zeros for as long as it stays within ``2**-k`` of ``n``, after which
    the remaining digits are extracted from ``x`` itself.  Integers never
    leave the zero loop.
    """

    def source():
        third = Fraction(1, 3)
        m = 0
        while True:
            enc = hull(x.prefix(m))
            n = floor(enc.lo)
            if _in_open(enc, n + third, n + 2 * third):
                yield from iter(x)
                return
            n = floor(enc.mid + Fraction(1, 2))
            if _in_open(enc, n - Fraction(1, 2), n + Fraction(1, 2)):
                break
            m += 1
        yield n
        k = 1
        while True:
            enc = hull(x.prefix(m))
            if _in_open(enc, n - dyadic(k + 1), n + dyadic(k + 1)):
                yield 0
                k += 1
                continue
            if _in_open(enc, n - dyadic(k), n - dyadic(k + 2)) or _in_open(
                enc, n + dyadic(k + 2), n + dyadic(k)
            ):
                # committed prefix n 0^(k-1) has hull [n - 2^-(k-1), n + 2^-(k-1)]
                yield from _extract(to_intervals(x), Fraction(n), k - 1)
                return
            m += 1

    return DigitStream(source, label=f"norm({x.label})" if x.label else None)


def format_seq(s: DigitSeq) -> str:
    if s.head is None:
        return "e"
    return f"{s.head}:" + " ".join(_GLYPH[d] for d in s.digits)


def format_stream(x: DigitStream, n: int) -> str:
    """Head and first ``n`` digits in the canonical ``a:d1 d2 ...`` form."""
    return format_seq(x.prefix(n))


_STREAM_RE = re.compile(r"^\s*(-?\d+)\s*:\s*([^()]*?)\s*(?:\(([^()]*)\))?\s*$")


def _parse_digits(text: str) -> tuple:
    out = []
    for tok in text.split():
        if tok not in _PARSE_GLYPH:
            raise ValueError(f"bad digit {tok!r}")
        out.append(_PARSE_GLYPH[tok])
    return tuple(out)


def parse_seq(text: str) -> DigitSeq:
    """Parse a finite compact ``"a:d1 d2 ..."`` (or ``"e"`` for the empty one)."""
    if text.strip() == "e":
        return DigitSeq()
    m = _STREAM_RE.match(text)
    if not m or m.group(3) is not None:
        raise ValueError(f"malformed digit sequence {text!r}")
    return DigitSeq(int(m.group(1)), _parse_digits(m.group(2)))


def parse_stream(text: str) -> DigitStream:
    """Parse a stream literal.

    ``"a:d1 .. dk"`` repeats the listed digits forever (so ``"3:-"`` is
    ``3 - 1/2 - 1/4 - ...``), ``"a:d1 .. dj (e1 .. em)"`` is a prefix followed
    by a repeating period, and ``"a:"`` is ``a`` followed by zeros.
    """
    m = _STREAM_RE.match(text)
    if not m:
        raise ValueError(f"malformed digit stream {text!r}")
    head = int(m.group(1))
    listed = _parse_digits(m.group(2))
    if m.group(3) is not None:
        period = _parse_digits(m.group(3))
        if not period:
            raise ValueError("empty period")
        x = DigitStream.periodic(head, listed, period)
    else:
        x = DigitStream.periodic(head, (), listed or (0,))
    x.label = text.strip()
    return x
