"""Total approximants of a continuous functional known only by evaluation.

Given ``f`` on type-1 functions, walk a fixed enumeration of observations
``(p_i, a_i)`` (a finite table and a candidate value).  At stage ``n`` keep
the observations whose value ``f`` confirms on every joint witness seen so
far (the set ``X``), then the ones supported by an earlier confirmed
observation that no conflicting confirmed observation overlaps (the set
``Y``).  ``f_n`` answers with the value of the first ``Y`` member below its
argument, and ``f_n(x_n)`` settles on ``f(x)`` along Grilliot sequences.

The ambient set defaults to all total functions.  For a restricted set the
caller supplies ``admissible`` (does a table extend into the set?) and
``witness`` (a joint extension inside the set); neither can be decided in
general, so they carry that burden.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Optional, Sequence

from .errors import Unstabilized
from .kk import NatCompact1, TotalFn1, TotalFn2, approx, consistent, pad_total


class Observation(NamedTuple):
    compact: NatCompact1
    value: int


def joint_witness(p: NatCompact1, q: NatCompact1) -> Optional[TotalFn1]:
    """Zero-padded union of two consistent tables, or None."""
    if not consistent(p, q):
        return None
    return pad_total(p.union(q))


def table_weight(c: NatCompact1) -> int:
    return sum(k + v + 1 for k, v in c.items())


def _tables_of_weight(w: int) -> list[NatCompact1]:
    out = []

    def rec(min_key, rem, acc):
        if rem == 0:
            out.append(NatCompact1(acc))
            return
        for k in range(min_key, rem):
            for v in range(rem - k):
                rec(k + 1, rem - k - v - 1, acc + [(k, v)])

    rec(0, w, [])
    return sorted(out, key=lambda c: c.items())


def iter_observations(admissible: Callable[[NatCompact1], bool] = None) -> Iterator[Observation]:
    """Every (table, value) pair exactly once.

    Pairs come in rounds of increasing ``table_weight(p) + a``; inside a
    round, lighter tables first, then tables in lexicographic order.
    """
    by_weight: dict[int, list] = {}
    total = 0
    while True:
        for w in range(total + 1):
            if w not in by_weight:
                by_weight[w] = _tables_of_weight(w)
            for c in by_weight[w]:
                if admissible is None or admissible(c):
                    yield Observation(c, total - w)
        total += 1


def enumerate_observations(count: int, admissible=None) -> list[Observation]:
    it = iter_observations(admissible)
    return [next(it) for _ in range(count)]


@dataclass(frozen=True)
class Stage:
    n: int
    X: frozenset
    Y: frozenset


def _as_fn2(f) -> TotalFn2:
    return f if isinstance(f, TotalFn2) else TotalFn2(f)


def build_stage(f, observations: Sequence[Observation], n: int,
                witness=joint_witness) -> Stage:
    """Stage ``n`` computed straight from the definitions of ``X`` and ``Y``."""
    f = _as_fn2(f)
    if len(observations) <= n:
        raise ValueError(f"stage {n} needs {n + 1} observations, got {len(observations)}")
    obs = observations[: n + 1]
    memo = {}

    def f_z(i, j):
        key = (min(i, j), max(i, j))
        if key not in memo:
            z = witness(obs[i].compact, obs[j].compact)
            memo[key] = None if z is None else f(z)
        return memo[key]

    X = frozenset(
        i for i in range(n + 1)
        if all(f_z(i, j) is None or f_z(i, j) == obs[i].value for j in range(n + 1))
    )

    def supported(j, r):
        pj, aj = obs[j]
        pr, ar = obs[r]
        if r not in X or aj != ar or not pr.below(pj):
            return False
        return all(
            obs[i].value == ar or not consistent(obs[i].compact, pj)
            for i in range(r) if i in X
        )

    Y = frozenset(j for j in range(n + 1) if any(supported(j, r) for r in range(n + 1)))
    return Stage(n, X, Y)


def realize_stage(stage: Stage, observations: Sequence[Observation]) -> TotalFn2:
    """``f_n``: value of the first ``Y`` member whose table ``x`` extends, else 0."""
    members = [observations[j] for j in sorted(stage.Y)]

    def f_n(x):
        for p, a in members:
            if p.below(x):
                return a
        return 0

    return TotalFn2(f_n, name=f"f_{stage.n}")


class ApproxScheme:
    """Stages ``0..N`` of the construction for one functional.

    Built in one sweep: for each observation the first index whose joint
    witness refutes it fixes when it leaves ``X``, and ``Y`` membership
    reduces to a union of stage intervals.  :func:`build_stage` is the
    direct, slower route and must agree stage by stage.
    """

    def __init__(self, f, N: int, observations: Sequence[Observation] = None,
                 witness=joint_witness, admissible=None):
        self.f = _as_fn2(f)
        self.N = N
        self.observations = list(observations) if observations is not None \
            else enumerate_observations(N + 1, admissible)
        if len(self.observations) <= N:
            raise ValueError(f"{N + 1} observations needed, got {len(self.observations)}")
        self._witness_fn = witness
        self._witnesses: dict = {}
        self.stages = self._sweep()
        self._fns: dict = {}

    def witness(self, i: int, j: int) -> Optional[TotalFn1]:
        key = (min(i, j), max(i, j))
        if key not in self._witnesses:
            self._witnesses[key] = self._witness_fn(
                self.observations[key[0]].compact, self.observations[key[1]].compact
            )
        return self._witnesses[key]

    def _sweep(self) -> list[Stage]:
        N, obs = self.N, self.observations[: self.N + 1]
        never = N + 1
        bad = []
        for i, (_, a) in enumerate(obs):
            first = never
            for j in range(N + 1):
                z = self.witness(i, j)
                if z is not None and self.f(z) != a:
                    first = j
                    break
            bad.append(first)
        # j is in Y_n exactly for n in some [start, stop] below
        spans: list[list[tuple]] = [[] for _ in obs]
        for j, (pj, aj) in enumerate(obs):
            for r, (pr, ar) in enumerate(obs):
                if ar != aj or not pr.below(pj):
                    continue
                clear = max(
                    (bad[i] for i in range(r)
                     if obs[i].value != ar and consistent(obs[i].compact, pj)),
                    default=0,
                )
                start, stop = max(j, r, clear), bad[r] - 1
                if start <= stop:
                    spans[j].append((start, stop))
        stages = []
        for n in range(N + 1):
            X = frozenset(i for i in range(n + 1) if bad[i] > n)
            Y = frozenset(j for j in range(n + 1) if any(s <= n <= t for s, t in spans[j]))
            stages.append(Stage(n, X, Y))
        return stages

    def fn(self, n: int) -> TotalFn2:
        if n not in self._fns:
            self._fns[n] = realize_stage(self.stages[n], self.observations)
        return self._fns[n]

    @property
    def _clashes(self) -> list[tuple]:
        # observation pairs that would break Y-agreement if both were in Y
        if not hasattr(self, "_clash_cache"):
            obs = self.observations[: self.N + 1]
            self._clash_cache = [
                (j, k) for j in range(len(obs)) for k in range(j + 1, len(obs))
                if obs[j].value != obs[k].value and consistent(obs[j].compact, obs[k].compact)
            ]
        return self._clash_cache

    def y_conflicts(self, n: int) -> list[tuple]:
        """Pairs in ``Y_n`` with consistent tables but different values (should be empty)."""
        ys = self.stages[n].Y
        return [(j, k) for j, k in self._clashes if j in ys and k in ys]

    def trajectory(self, x) -> list[int]:
        """``f_n(x_n)`` for ``n = 0..N`` with ``x_n`` the n-th approximation of ``x``."""
        return [self.fn(n)(approx(x, n)) for n in range(self.N + 1)]

    def stabilization(self, x) -> Optional[int]:
        """Least ``n0`` with ``f_n(x_n) = f(x)`` for all ``n0 <= n <= N``, or None."""
        target = self.f(x)
        n0 = None
        for n, v in enumerate(self.trajectory(x)):
            if v == target:
                if n0 is None:
                    n0 = n
            else:
                n0 = None
        return n0

    def check_convergence(self, points) -> dict:
        """Map each test point to its stabilization stage.

        Raises :class:`Unstabilized` naming the points that have not settled
        by stage ``N``.
        """
        found, missing = {}, []
        for name, x in _named(points):
            n0 = self.stabilization(x)
            if n0 is None:
                missing.append(name)
            else:
                found[name] = n0
        if missing:
            raise Unstabilized(
                f"no stabilization within N={self.N} for {', '.join(map(str, missing))}",
                missing,
            )
        return found


def _named(points):
    if isinstance(points, dict):
        return list(points.items())
    return [(getattr(x, "name", None) or i, x) for i, x in enumerate(points)]


def approximants(f, N: int, observations=None, witness=joint_witness,
                 admissible=None) -> ApproxScheme:
    """Stages ``f_0 .. f_N`` for ``f`` over the default (or given) enumeration."""
    return ApproxScheme(f, N, observations, witness, admissible)


def extend_from_closed(f, memberships: Sequence[Callable], approximant_fns: Sequence) -> TotalFn2:
    """Total extension of ``f`` from ``A = ⋂ A_m`` to every function.

    Inside ``A`` (every membership test passes) the value is ``f(z)``;
    otherwise it is ``f_m(z)`` for the first test ``A_m`` that ``z`` fails.
    """
    f = _as_fn2(f)
    if len(approximant_fns) < len(memberships):
        raise ValueError("need one approximant per membership test")

    def g(z):
        for m, member in enumerate(memberships):
            if not member(z):
                return approximant_fns[m](z)
        return f(z)

    return TotalFn2(g, name="extension")
