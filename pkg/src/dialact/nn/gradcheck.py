"""Central finite-difference gradients, the independent oracle for backward().

The numeric route only ever calls the forward computation (no tape), so it
shares nothing with the analytic backward path it is used to verify. Run it
on float64 tensors: float32 rounding drowns the O(eps^2) truncation error.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .autograd import Tensor


def finite_difference_grads(
    loss_fn: Callable[[], Tensor],
    tensors: Sequence[Tensor],
    eps: float = 1e-3,
) -> list[np.ndarray]:
    """d(loss)/d(tensor) by central differences, perturbing entries in place."""
    grads = []
    for tensor in tensors:
        grad = np.zeros_like(tensor.data)
        flat = tensor.data.reshape(-1)
        grad_flat = grad.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + eps
            upper = float(loss_fn().data)
            flat[i] = original - eps
            lower = float(loss_fn().data)
            flat[i] = original
            grad_flat[i] = (upper - lower) / (2 * eps)
        grads.append(grad)
    return grads


def max_relative_error(
    analytic: np.ndarray | None,
    numeric: np.ndarray,
    floor: float = 1e-6,
) -> float:
    """Largest elementwise |a-n| / max(|a|,|n|), skipping entries below floor.

    Entries where both magnitudes sit under `floor` are below the resolution
    of the eps^2 truncation noise and count as agreeing.
    """
    a = np.zeros_like(numeric) if analytic is None else np.asarray(analytic, dtype=np.float64)
    n = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(np.abs(a), np.abs(n))
    mask = denom >= floor
    if not mask.any():
        return 0.0
    return float((np.abs(a - n)[mask] / denom[mask]).max())
