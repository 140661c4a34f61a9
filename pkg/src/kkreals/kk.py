"""Kleene-Kreisel functionals of type at most 2, at desk scale.

Type-1 objects are total functions on the naturals, type-2 objects are total
functionals on those.  The n-th approximation clips every value and every
argument to ``{0..n}`` (anything above ``n`` becomes 0), and its images form
the finite sets ``X^k_n`` enumerated by :func:`enum_X`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

from .errors import BudgetExhausted, EnumerationCapExceeded

DEFAULT_CAP = 10**6
DEFAULT_BUDGET = 100_000


def clip(v: int, n: int) -> int:
    """The level-0 approximation: ``v`` if ``v <= n`` else 0."""
    return v if v <= n else 0


class NatCompact1:
    """A finite partial function on the naturals, written ``{0:1, 3:2}``."""

    __slots__ = ("_items",)

    def __init__(self, table: Union[Mapping[int, int], Iterable[tuple]] = ()):
        items = dict(table.items() if isinstance(table, Mapping) else table)
        for k, v in items.items():
            if k < 0 or v < 0:
                raise ValueError("compacts map naturals to naturals")
        self._items = tuple(sorted(items.items()))

    def items(self):
        return self._items

    def keys(self):
        return tuple(k for k, _ in self._items)

    def as_dict(self) -> dict:
        return dict(self._items)

    def __len__(self):
        return len(self._items)

    def __getitem__(self, k):
        return self.as_dict()[k]

    def __contains__(self, k):
        return any(k == key for key, _ in self._items)

    def __eq__(self, other):
        return isinstance(other, NatCompact1) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def below(self, f) -> bool:
        """``self ⊑ f`` for a total ``f`` (or a compact)."""
        if isinstance(f, NatCompact1):
            d = f.as_dict()
            return all(d.get(k) == v for k, v in self._items)
        return all(f(k) == v for k, v in self._items)

    def union(self, other: NatCompact1) -> NatCompact1:
        d = self.as_dict()
        d.update(other.as_dict())
        return NatCompact1(d)

    def __str__(self):
        return "{" + ", ".join(f"{k}:{v}" for k, v in self._items) + "}"

    __repr__ = __str__


def parse_table(text: str) -> NatCompact1:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"malformed table {text!r}")
    body = body[1:-1].strip()
    items = []
    if body:
        for part in body.split(","):
            k, _, v = part.partition(":")
            items.append((int(k), int(v)))
    return NatCompact1(items)


class TotalFn1:
    """A total function on the naturals."""

    def __init__(self, fn: Callable[[int], int], name: str = None):
        self._fn = fn
        self.name = name

    def __call__(self, i: int) -> int:
        return self._fn(i)

    def __repr__(self):
        return f"TotalFn1({self.name or self._fn!r})"


class _Recorder:
    def __init__(self, f, budget):
        self.f = f
        self.budget = budget
        self.queries: dict[int, int] = {}
        self.count = 0

    def __call__(self, i):
        self.count += 1
        if self.count > self.budget:
            raise BudgetExhausted(
                f"functional made more than {self.budget} queries",
                {"queries": dict(self.queries)},
            )
        v = self.f(i)
        self.queries[i] = v
        return v


class TotalFn2:
    """A total continuous functional on type-1 functions.

    The argument is always passed through a fresh recording wrapper, so each
    call knows which values it read and runaway evaluations stop with a
    diagnostic instead of hanging.
    """

    def __init__(self, fn: Callable[[Callable[[int], int]], int], name: str = None,
                 budget: int = DEFAULT_BUDGET):
        self._fn = fn
        self.name = name
        self.budget = budget

    def trace(self, f) -> tuple[int, dict]:
        """Value of the functional and the ``{argument: value}`` pairs it read."""
        rec = _Recorder(f, self.budget)
        return self._fn(rec), rec.queries

    def __call__(self, f) -> int:
        return self.trace(f)[0]

    def __repr__(self):
        return f"TotalFn2({self.name or self._fn!r})"


@dataclass(frozen=True)
class ApproxElem:
    """An element of ``X^k_n`` stored as its canonical table.

    level 0: ``table`` is the number itself.  level 1: ``table[i]`` is the
    value at ``i`` for ``i <= n``.  level 2: ``table[j]`` is the value at the
    ``j``-th element of ``enum_X(1, n)``.
    """

    level: int
    bound: int
    table: Union[int, tuple]

    def __call__(self, x):
        return eval_approx(self, x)

    def __str__(self):
        if self.level == 0:
            return str(self.table)
        return "{" + ", ".join(f"{i}:{v}" for i, v in enumerate(self.table)) + "}"


def _approx1_table(f, n):
    return tuple(clip(f(i), n) for i in range(n + 1))


def x1_index(table: tuple, n: int) -> int:
    """Position of a level-1 table in the lexicographic order of ``enum_X(1, n)``."""
    idx = 0
    for v in table:
        idx = idx * (n + 1) + v
    return idx


def approx(a, n: int, level: int = None) -> ApproxElem:
    """The n-th approximation of ``a``.

    The level is inferred from the value when not given: ints are level 0,
    :class:`TotalFn2` level 2, other callables level 1.
    """
    if level is None:
        if isinstance(a, ApproxElem):
            level = a.level
        elif isinstance(a, int):
            level = 0
        elif isinstance(a, TotalFn2):
            level = 2
        else:
            level = 1
    if level == 0:
        return ApproxElem(0, n, clip(a.table if isinstance(a, ApproxElem) else a, n))
    if level == 1:
        return ApproxElem(1, n, _approx1_table(a, n))
    if level == 2:
        return ApproxElem(2, n, tuple(clip(a(x), n) for x in enum_X(1, n)))
    raise ValueError("only levels 0, 1 and 2 are supported")


def eval_approx(a: ApproxElem, x=None) -> int:
    """Evaluate ``a_n`` at ``x`` using ``a_n(x) = (a(x_n))_n``."""
    n = a.bound
    if a.level == 0:
        return a.table
    if a.level == 1:
        return a.table[clip(x, n)]
    if a.level == 2:
        xn = x.table if isinstance(x, ApproxElem) and x.level == 1 and x.bound == n \
            else _approx1_table(x, n)
        return a.table[x1_index(xn, n)]
    raise ValueError("only levels 0, 1 and 2 are supported")


def cardinality_X(k: int, n: int) -> int:
    if k == 0:
        return n + 1
    return (n + 1) ** cardinality_X(k - 1, n)


def enum_X(k: int, n: int, cap: int = DEFAULT_CAP) -> list[ApproxElem]:
    """All of ``X^k_n``, tables in lexicographic order."""
    if k not in (0, 1, 2):
        raise ValueError("only levels 0, 1 and 2 are supported")
    size = cardinality_X(k, n)
    if size > cap:
        raise EnumerationCapExceeded(k, n, size, cap)
    if k == 0:
        return [ApproxElem(0, n, v) for v in range(n + 1)]
    width = cardinality_X(k - 1, n)
    return [ApproxElem(k, n, t) for t in itertools.product(range(n + 1), repeat=width)]


def modulus(level: int, point, functional, budget: int = DEFAULT_BUDGET) -> int:
    """Grilliot's modulus of convergence.

    level 1: ``point`` is a natural ``i`` and ``functional`` a function ``f``;
    returns ``max(i, f(i))``.  level 2: ``point`` is a function ``f`` and
    ``functional`` is ``F``; returns ``m`` with ``F(f_n) = F(f)`` for all
    ``n >= m``.
    """
    if level == 1:
        return max(point, functional(point))
    if level != 2:
        raise ValueError("modulus is defined for levels 1 and 2")
    f, F = point, functional
    target = F(f)
    cache: dict[int, int] = {}

    def F_at(m):
        if m not in cache:
            cache[m] = F(TotalFn1(lambda x, m=m: clip(f(clip(x, m)), m)))
        return cache[m]

    def h(n):
        # h_n agrees with f_m for the least m >= n below g(xi) where F(f_m)
        # differs from F(f), and with f_{g(xi)} otherwise.
        def value(xi):
            g = max(xi, f(xi))
            m = n
            while m < g:
                if F_at(m) != target:
                    return clip(f(clip(xi, m)), m)
                m += 1
            return clip(f(clip(xi, g)), g)

        return TotalFn1(value)

    for n in range(budget):
        if F(h(n)) == target:
            return max(target, n)
    raise BudgetExhausted(f"no stable h_n found below n={budget}", {"searched": budget})


def n_a(c) -> int:
    """Largest number occurring anywhere in a compact (0 for the empty one).

    Accepts a :class:`NatCompact1` or a level-2 compact given as a mapping
    (or pairs) from :class:`NatCompact1` arguments to values.
    """
    if isinstance(c, NatCompact1):
        return max((max(k, v) for k, v in c.items()), default=0)
    pairs = c.items() if isinstance(c, Mapping) else c
    return max((max(n_a(arg), v) for arg, v in pairs), default=0)


def pad_total(c: NatCompact1) -> TotalFn1:
    """Total extension of ``c`` sending every other argument to 0."""
    table = c.as_dict()
    return TotalFn1(lambda i: table.get(i, 0), name=f"pad{c}")


def consistent(c: NatCompact1, d: NatCompact1) -> bool:
    """Do the two tables agree on their shared keys?"""
    dd = d.as_dict()
    return all(dd.get(k, v) == v for k, v in c.items())
