"""Exact reals in two representations and Kleene-Kreisel functionals embedded into them."""

from .exact import Interval, IntervalStream, embed_nat, iv_meet, rational_stream, stream_query
from .digits import (
    DigitSeq,
    DigitStream,
    affine,
    decode,
    extend_total,
    from_intervals,
    hull,
    normalize,
    sim0,
    to_intervals,
)
from .kk import (
    ApproxElem,
    NatCompact1,
    TotalFn1,
    TotalFn2,
    approx,
    consistent,
    enum_X,
    eval_approx,
    modulus,
    n_a,
    pad_total,
)
from .embeddings import (
    DigitRealFn1,
    RealFn1,
    WeightRow,
    dist_to_nat,
    effective_weights,
    mu_point,
    mu_table,
    pi1,
    pi1_S,
    pi2,
    pi2_S,
    pi_inv0,
    pi_inv1,
)
from .approx_lemma import (
    ApproxScheme,
    Observation,
    approximants,
    build_stage,
    extend_from_closed,
    joint_witness,
    realize_stage,
)

__version__ = "0.1.0"
