"""
Reverse-mode automatic differentiation over float64 numpy arrays: a tape,
the primitives the network needs, a finite-difference checker and Adam.
"""

from .tape import Tape, TensorNode, backward
from .ops import (
    BatchNormState,
    add,
    add_n,
    batch_norm,
    concat,
    edge_matvec,
    gather,
    linear,
    relu,
    scale,
    scatter_add_rows,
    segment_max,
    segment_mean,
    segment_sum,
    softmax,
    softmax_cross_entropy,
    sparse_apply,
    sum_all,
    weighted_sum,
)
from .gradcheck import analytic_gradients, grad_check
from .optim import AdamState, ParamStore, adam_step, gradients_by_name

__all__ = [
    "AdamState",
    "BatchNormState",
    "ParamStore",
    "Tape",
    "TensorNode",
    "adam_step",
    "add",
    "add_n",
    "analytic_gradients",
    "backward",
    "batch_norm",
    "concat",
    "edge_matvec",
    "gather",
    "grad_check",
    "gradients_by_name",
    "linear",
    "relu",
    "scale",
    "scatter_add_rows",
    "segment_max",
    "segment_mean",
    "segment_sum",
    "softmax",
    "softmax_cross_entropy",
    "sparse_apply",
    "sum_all",
    "weighted_sum",
]
