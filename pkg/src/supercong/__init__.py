"""Exact-arithmetic checks of central-binomial supercongruences."""
from .exact_arith import (
    INF,
    NotInvertible,
    NotPAdicInteger,
    ParameterError,
    PrecisionExhausted,
    PrimePowerCtx,
    ValUnit,
    mod_inv,
    reduce,
    vp,
)
from .kernel import BACKEND

__version__ = "0.1.0"
