"""Named parameter storage, initialization, and the Adam update."""

from __future__ import annotations

import hashlib
from typing import Iterable, Iterator

import numpy as np

from ..errors import ConfigurationError, DimensionError
from .autograd import Tensor


def _fans(shape: tuple[int, ...]) -> tuple[int, int]:
    if len(shape) == 2:  # (out, in) dense convention; also (vocab, dim) embeddings
        return shape[1], shape[0]
    if len(shape) == 3:  # (filters, width, features) convolution kernels
        return shape[1] * shape[2], shape[1] * shape[0]
    raise DimensionError(f"no fan convention for shape {shape}")


def init_params(shape: Iterable[int], rng, dtype=np.float32) -> Tensor:
    """Glorot-uniform tensor for weights; rank-1 shapes (biases) are zeros.

    `rng` may be an integer seed or a numpy Generator; results are
    deterministic for a fixed seed.
    """
    shape = tuple(int(s) for s in shape)
    gen = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    if len(shape) == 1:
        return Tensor(np.zeros(shape, dtype=dtype), requires_grad=True)
    fan_in, fan_out = _fans(shape)
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    values = gen.uniform(-bound, bound, size=shape).astype(dtype)
    return Tensor(values, requires_grad=True)


class ParamStore:
    """Insertion-ordered map of unique names to parameter tensors.

    Keeps per-entry Adam state (first/second moments, step counter) beside
    the tensors; gradients live on the tensors themselves.
    """

    def __init__(self):
        self._entries: dict[str, Tensor] = {}
        self._moment1: dict[str, np.ndarray] = {}
        self._moment2: dict[str, np.ndarray] = {}
        self._steps: dict[str, int] = {}

    def add(self, name: str, tensor: Tensor) -> Tensor:
        if name in self._entries:
            raise ConfigurationError(f"duplicate parameter name {name!r}")
        tensor.requires_grad = True
        tensor.name = name
        self._entries[name] = tensor
        self._reset_state(name)
        return tensor

    def replace(self, name: str, tensor: Tensor) -> None:
        if name not in self._entries:
            raise ConfigurationError(f"unknown parameter name {name!r}")
        tensor.requires_grad = True
        tensor.name = name
        self._entries[name] = tensor
        self._reset_state(name)

    def _reset_state(self, name: str) -> None:
        value = self._entries[name].data
        self._moment1[name] = np.zeros_like(value)
        self._moment2[name] = np.zeros_like(value)
        self._steps[name] = 0

    def __getitem__(self, name: str) -> Tensor:
        return self._entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return list(self._entries)

    def items(self) -> Iterator[tuple[str, Tensor]]:
        return iter(self._entries.items())

    def tensors(self) -> list[Tensor]:
        return list(self._entries.values())

    def step_count(self, name: str) -> int:
        return self._steps[name]

    def zero_grad(self) -> None:
        for tensor in self._entries.values():
            tensor.zero_grad()

    def scale_grads(self, factor: float, names: Iterable[str] | None = None) -> None:
        for name in names if names is not None else self._entries:
            grad = self._entries[name].grad
            if grad is not None:
                self._entries[name].grad = grad * factor

    def checksum(self, names: Iterable[str] | None = None) -> str:
        """SHA-256 over the selected entries' names, shapes, and raw bytes."""
        digest = hashlib.sha256()
        for name in names if names is not None else self._entries:
            tensor = self._entries[name]
            digest.update(name.encode())
            digest.update(str(tensor.shape).encode())
            digest.update(np.ascontiguousarray(tensor.data).tobytes())
        return digest.hexdigest()


def adam_step(
    store: ParamStore,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
    names: Iterable[str] | None = None,
) -> None:
    """Bias-corrected Adam update of the selected entries.

    Gradients are read but never modified; zeroing is the caller's job.
    Entries with no gradient are skipped.
    """
    if lr <= 0:
        raise ConfigurationError(f"learning rate must be positive, got {lr}")
    for name in names if names is not None else store.names():
        tensor = store[name]
        grad = tensor.grad
        if grad is None:
            continue
        store._steps[name] += 1
        t = store._steps[name]
        m = store._moment1[name]
        v = store._moment2[name]
        m *= beta1
        m += (1 - beta1) * grad
        v *= beta2
        v += (1 - beta2) * grad * grad
        m_hat = m / (1 - beta1**t)
        v_hat = v / (1 - beta2**t)
        tensor.data -= (lr * m_hat / (np.sqrt(v_hat) + eps)).astype(tensor.data.dtype)
