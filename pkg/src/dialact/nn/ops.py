"""Differentiable primitives the classifiers are assembled from.

All functions take and return Tensors. Shapes follow the single-example
convention: vectors are 1-d, sequences are (positions, features). Each op
validates its operands and registers a backward closure via autograd.emit.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import (
    ConfigurationError,
    DimensionError,
    EmptyInputError,
    InputTooShortError,
    LabelError,
)
from .autograd import Tensor, emit


def add(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise DimensionError(f"add: operand shapes differ, {a.shape} vs {b.shape}")
    out = Tensor(a.data + b.data)
    return emit(out, (a, b), lambda g: (g, g))


def scale(a: Tensor, factor: float) -> Tensor:
    out = Tensor(a.data * factor)
    return emit(out, (a,), lambda g: (g * factor,))


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError(f"matmul: expected 2-d operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: inner dimensions differ, {a.shape} @ {b.shape}")
    out = Tensor(a.data @ b.data)

    def backward(g):
        return g @ b.data.T, a.data.T @ g

    return emit(out, (a, b), backward)


def transpose(a: Tensor) -> Tensor:
    out = Tensor(a.data.T.copy())
    return emit(out, (a,), lambda g: (g.T,))


def relu(a: Tensor) -> Tensor:
    mask = a.data > 0
    out = Tensor(np.where(mask, a.data, 0))
    return emit(out, (a,), lambda g: (g * mask,))


def concat(parts: list[Tensor], axis: int = 0) -> Tensor:
    if not parts:
        raise EmptyInputError("concat: no tensors given")
    out = Tensor(np.concatenate([p.data for p in parts], axis=axis))
    sizes = [p.shape[axis] for p in parts]
    offsets = np.cumsum([0] + sizes)

    def backward(g):
        return tuple(
            np.take(g, range(offsets[i], offsets[i + 1]), axis=axis) for i in range(len(parts))
        )

    return emit(out, tuple(parts), backward)


def split_columns(a: Tensor, sections: int) -> list[Tensor]:
    """Split the last axis into equal sections, each a recorded slice."""
    if a.shape[-1] % sections != 0:
        raise DimensionError(f"split: {a.shape[-1]} columns not divisible by {sections}")
    width = a.shape[-1] // sections
    pieces = []
    for s in range(sections):
        lo = s * width
        piece = Tensor(a.data[..., lo : lo + width].copy())

        def backward(g, lo=lo):
            full = np.zeros_like(a.data)
            full[..., lo : lo + width] = g
            return (full,)

        pieces.append(emit(piece, (a,), backward))
    return pieces


def gather_rows(table: Tensor, ids: list[int] | np.ndarray) -> Tensor:
    idx = np.asarray(ids, dtype=np.int64)
    out = Tensor(table.data[idx])

    def backward(g):
        dt = np.zeros_like(table.data)
        np.add.at(dt, idx, g)
        return (dt,)

    return emit(out, (table,), backward)


def dropout(a: Tensor, rate: float, rng: np.random.Generator) -> Tensor:
    """Inverted dropout; call only in training mode."""
    if rate <= 0.0:
        return a
    if rate >= 1.0:
        raise ConfigurationError(f"dropout rate must be < 1, got {rate}")
    keep = (rng.random(a.shape) >= rate).astype(a.data.dtype) / (1.0 - rate)
    out = Tensor(a.data * keep)
    return emit(out, (a,), lambda g: (g * keep,))


def dense(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    """y[i] = sum_j weight[i][j] * x[j] + bias[i]."""
    if weight.ndim != 2:
        raise DimensionError(f"dense: W must be 2-d, got shape {weight.shape}")
    if x.ndim != 1:
        raise DimensionError(f"dense: x must be 1-d, got shape {x.shape}")
    if weight.shape[1] != x.shape[0]:
        raise DimensionError(
            f"dense: W columns ({weight.shape[1]}) do not match x width ({x.shape[0]})"
        )
    if bias.ndim != 1 or bias.shape[0] != weight.shape[0]:
        raise DimensionError(
            f"dense: b has shape {bias.shape}, expected ({weight.shape[0]},) to match W rows"
        )
    out = Tensor(weight.data @ x.data + bias.data)

    def backward(g):
        return weight.data.T @ g, np.outer(g, x.data), g

    return emit(out, (x, weight, bias), backward)


def conv1d(seq: Tensor, kernels: Tensor, bias: Tensor) -> Tensor:
    """Valid convolution over positions: out[p][f] = sum kernels[f]*seq[p:p+w] + bias[f]."""
    if seq.ndim != 2:
        raise DimensionError(f"conv1d: seq must be 2-d (positions, features), got {seq.shape}")
    if kernels.ndim != 3:
        raise DimensionError(f"conv1d: kernels must be 3-d (filters, width, features), got {kernels.shape}")
    length, feat = seq.shape
    filters, width, kfeat = kernels.shape
    if kfeat != feat:
        raise DimensionError(
            f"conv1d: kernel feature width ({kfeat}) does not match seq features ({feat})"
        )
    if bias.shape != (filters,):
        raise DimensionError(f"conv1d: bias has shape {bias.shape}, expected ({filters},)")
    if length < width:
        raise InputTooShortError(
            f"conv1d: sequence length {length} is shorter than kernel width {width}"
        )
    windows = np.lib.stride_tricks.sliding_window_view(seq.data, width, axis=0)
    windows = windows.transpose(0, 2, 1)  # (positions, width, features)
    out = Tensor(np.einsum("pwd,fwd->pf", windows, kernels.data) + bias.data)

    def backward(g):
        d_kernels = np.einsum("pf,pwd->fwd", g, windows)
        d_bias = g.sum(axis=0)
        d_seq = np.zeros_like(seq.data)
        positions = g.shape[0]
        for offset in range(width):
            d_seq[offset : offset + positions] += g @ kernels.data[:, offset, :]
        return d_seq, d_kernels, d_bias

    return emit(out, (seq, kernels, bias), backward)


def global_max_pool(x: Tensor) -> Tensor:
    """Per-column max over positions; gradient goes to the first argmax."""
    if x.ndim != 2:
        raise DimensionError(f"global_max_pool: expected 2-d input, got {x.shape}")
    if x.shape[0] == 0:
        raise EmptyInputError("global_max_pool: empty sequence")
    argmax = np.argmax(x.data, axis=0)
    cols = np.arange(x.shape[1])
    out = Tensor(x.data[argmax, cols])

    def backward(g):
        dx = np.zeros_like(x.data)
        dx[argmax, cols] = g
        return (dx,)

    return emit(out, (x,), backward)


def softmax_rows(scores: Tensor) -> Tensor:
    """Row-wise softmax with max-subtraction stabilization."""
    shifted = scores.data - scores.data.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=-1, keepdims=True)
    out = Tensor(probs)

    def backward(g):
        inner = (g * probs).sum(axis=-1, keepdims=True)
        return (probs * (g - inner),)

    return emit(out, (scores,), backward)


def softmax_cross_entropy(logits: Tensor, label: int) -> tuple[Tensor, np.ndarray]:
    """Negative log-likelihood of `label`; also returns the probability vector."""
    if logits.ndim != 1:
        raise DimensionError(f"softmax_cross_entropy: logits must be 1-d, got {logits.shape}")
    k = logits.shape[0]
    if not 0 <= label < k:
        raise LabelError(f"label index {label} out of range for {k} classes")
    z = logits.data
    m = z.max()
    exp = np.exp(z - m)
    total = exp.sum()
    probs = exp / total
    loss = Tensor(np.asarray(m + math.log(total) - z[label], dtype=z.dtype))

    def backward(g):
        d = probs.copy()
        d[label] -= 1.0
        return (d * g,)

    return emit(loss, (logits,), backward), probs


def multi_head_self_attention(
    x: Tensor,
    w_query: Tensor,
    w_key: Tensor,
    w_value: Tensor,
    w_output: Tensor,
    heads: int,
) -> Tensor:
    """Scaled dot-product self-attention over positions, no positional encoding.

    Per head h (width d_k = d_model/heads): softmax(Q_h K_h^T / sqrt(d_k)) V_h,
    heads concatenated and projected by w_output. Permutation-equivariant over
    the position axis.
    """
    if x.ndim != 2:
        raise DimensionError(f"attention: expected (positions, d_model) input, got {x.shape}")
    d_model = x.shape[1]
    if heads < 1 or d_model % heads != 0:
        raise ConfigurationError(f"d_model {d_model} is not divisible by heads {heads}")
    for name, w in (("W_q", w_query), ("W_k", w_key), ("W_v", w_value), ("W_o", w_output)):
        if w.shape != (d_model, d_model):
            raise DimensionError(f"attention: {name} has shape {w.shape}, expected ({d_model}, {d_model})")
    d_k = d_model // heads
    q_heads = split_columns(matmul(x, w_query), heads)
    k_heads = split_columns(matmul(x, w_key), heads)
    v_heads = split_columns(matmul(x, w_value), heads)
    outputs = []
    for q, k, v in zip(q_heads, k_heads, v_heads):
        weights = softmax_rows(scale(matmul(q, transpose(k)), 1.0 / math.sqrt(d_k)))
        outputs.append(matmul(weights, v))
    return matmul(concat(outputs, axis=1), w_output)
