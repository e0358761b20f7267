from .autograd import Tape, Tensor, active_tape, as_tensor, record
from .gradcheck import finite_difference_grads, max_relative_error
from .ops import (
    add,
    concat,
    conv1d,
    dense,
    dropout,
    gather_rows,
    global_max_pool,
    matmul,
    multi_head_self_attention,
    relu,
    scale,
    softmax_cross_entropy,
    softmax_rows,
    split_columns,
    transpose,
)
from .params import ParamStore, adam_step, init_params

__all__ = [
    "Tape",
    "Tensor",
    "active_tape",
    "as_tensor",
    "record",
    "add",
    "concat",
    "conv1d",
    "dense",
    "dropout",
    "gather_rows",
    "global_max_pool",
    "matmul",
    "multi_head_self_attention",
    "relu",
    "scale",
    "softmax_cross_entropy",
    "softmax_rows",
    "split_columns",
    "transpose",
    "ParamStore",
    "adam_step",
    "init_params",
    "finite_difference_grads",
    "max_relative_error",
]
