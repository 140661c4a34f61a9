"""Shared generators and catalogues for the test modules."""

import random
from fractions import Fraction
from math import floor

from kkreals import DigitStream, NatCompact1, TotalFn1, TotalFn2, pad_total
from kkreals.embeddings import affine_fn, lift, pi1


def random_encoding(r, rng: random.Random) -> DigitStream:
    """A random signed-digit stream of the rational ``r``.

    Head and digits are drawn uniformly among the choices that keep the
    residual inside the hull of the prefix, so every redundancy is reachable.
    """
    r = Fraction(r)
    heads = [a for a in (floor(r) - 1, floor(r), floor(r) + 1, floor(r) + 2) if abs(r - a) <= 1]
    seed = rng.getrandbits(64)
    head = random.Random(seed).choice(heads)

    def source():
        local = random.Random(seed + 1)
        yield head
        e, h = r - head, Fraction(1)
        while True:
            h /= 2
            options = [b for b in (-1, 0, 1) if abs(e - b * h) <= h]
            b = local.choice(options)
            e -= b * h
            yield b

    return DigitStream(source, label=f"enc({r})")


def naive_value(head, digits):
    return head + sum(Fraction(b, 2 ** i) for i, b in enumerate(digits, 1))


def random_table_fn(rng: random.Random, max_key=20, max_val=20, size=None) -> TotalFn1:
    """A finitely generated function: a random finite table padded with zeros."""
    size = rng.randint(0, max_key + 1) if size is None else size
    keys = rng.sample(range(max_key + 1), min(size, max_key + 1))
    table = NatCompact1({k: rng.randint(0, max_val) for k in keys})
    return pad_total(table)


def random_fn1(rng: random.Random) -> TotalFn1:
    """A random total function: table on 0..30, affine-mod tail beyond."""
    vals = [rng.randint(0, 15) for _ in range(31)]
    a, b, m = rng.randint(0, 5), rng.randint(0, 9), rng.randint(1, 12)
    return TotalFn1(lambda x: vals[x] if x <= 30 else (a * x + b) % m, name="rand")


FN1 = {
    "succ": TotalFn1(lambda n: n + 1, "succ"),
    "id": TotalFn1(lambda n: n, "id"),
    "square": TotalFn1(lambda n: n * n, "square"),
    "const2": TotalFn1(lambda n: 2, "const2"),
    "mod3": TotalFn1(lambda n: n % 3, "mod3"),
    "table": pad_total(NatCompact1({0: 2, 1: 0, 2: 5})),
}

FN2 = {
    "f(0)": TotalFn2(lambda f: f(0), "f(0)"),
    "f(3)": TotalFn2(lambda f: f(3), "f(3)"),
    "f(0)+f(1)": TotalFn2(lambda f: f(0) + f(1), "f(0)+f(1)"),
    "f(f(0))": TotalFn2(lambda f: f(f(0)), "f(f(0))"),
    "if": TotalFn2(lambda f: 3 if f(2) == 0 else f(1), "if f(2)=0 then 3 else f(1)"),
    "const7": TotalFn2(lambda f: 7, "const7"),
    "f(1)*f(2)": TotalFn2(lambda f: f(1) * f(2), "f(1)*f(2)"),
    "sum": TotalFn2(lambda f: sum(f(i) for i in range(f(0) + 1)), "sum f(0..f(0))"),
}

# (F, f) pairs for the embedding identity
PAIRS = [
    ("f(3)", "succ"), ("f(0)", "succ"), ("f(0)+f(1)", "id"), ("f(f(0))", "succ"),
    ("if", "mod3"), ("if", "id"), ("const7", "square"), ("f(1)*f(2)", "square"),
    ("sum", "table"), ("f(f(0))", "table"), ("f(0)+f(1)", "const2"), ("sum", "mod3"),
]


def g_catalogue():
    """Ten real functions: exact interval ones and digit-stream lifts."""
    third = Fraction(1, 3)
    return {
        "x+1/2": affine_fn(1, Fraction(1, 2)),
        "x": affine_fn(1, 0),
        "x+1/4": affine_fn(1, Fraction(1, 4)),
        "x/3": affine_fn(third, 0),
        "2x/3+1/5": affine_fn(2 * third, Fraction(1, 5)),
        "-x+5/2": affine_fn(-1, Fraction(5, 2)),
        "pi1(square)+2/5": pi1(FN1["square"]).shifted(Fraction(2, 5)),
        "pi1(mod3)+1/3": pi1(FN1["mod3"]).shifted(third),
        "lift(x/3+1/7)": lift(affine_fn(third, Fraction(1, 7))),
        "lift(pi1(succ)+5/9)": lift(pi1(FN1["succ"]).shifted(Fraction(5, 9))),
    }
