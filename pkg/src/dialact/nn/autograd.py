"""Reverse-mode automatic differentiation on a linear tape.

Tensors wrap numpy arrays (float32 storage by default, float64 for the
gradient-checking shadow mode). While a Tape is active, every differentiable
operation appends one entry (output, inputs, backward closure); replaying the
tape in reverse accumulates gradients into the leaf tensors that asked for
them. Without an active tape, operations are plain numpy computations, which
is the inference path.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Callable, Iterator, Sequence

import numpy as np

from ..errors import StateError

_SUPPORTED_DTYPES = (np.float32, np.float64)


class Tensor:
    """A shaped block of real values, optionally tracked for gradients."""

    __slots__ = ("data", "grad", "requires_grad", "name")

    def __init__(self, data, requires_grad: bool = False, name: str | None = None, dtype=None):
        arr = np.asarray(data, dtype=dtype)
        if arr.dtype not in _SUPPORTED_DTYPES:
            arr = arr.astype(np.float32)
        self.data = arr
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def dtype(self):
        return self.data.dtype

    def zero_grad(self) -> None:
        self.grad = None

    def add_grad(self, contribution: np.ndarray) -> None:
        if self.grad is None:
            self.grad = contribution.copy()
        else:
            self.grad = self.grad + contribution

    def item(self) -> float:
        return float(self.data)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        tag = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}, dtype={self.data.dtype}{tag})"


BackwardFn = Callable[[np.ndarray], Sequence[np.ndarray | None]]


class Tape:
    """Ordered record of primitive applications for one forward pass."""

    def __init__(self):
        self._entries: list[tuple[Tensor, tuple[Tensor, ...], BackwardFn]] = []
        self._output_ids: set[int] = set()

    def __len__(self) -> int:
        return len(self._entries)

    def record(self, out: Tensor, inputs: Sequence[Tensor], backward: BackwardFn) -> None:
        self._entries.append((out, tuple(inputs), backward))
        self._output_ids.add(id(out))

    def backward(self, loss: Tensor) -> None:
        """Accumulate d(loss)/d(leaf) into every requires_grad leaf.

        Each recorded primitive is visited exactly once, in reverse
        application order. Calling backward twice without zeroing doubles
        the accumulated gradients.
        """
        if not self._entries:
            raise StateError("backward called without a recorded forward pass")
        if id(loss) not in self._output_ids:
            raise StateError("backward target was not produced under this tape")

        flowing: dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
        leaves: dict[int, Tensor] = {}
        for out, inputs, backward in reversed(self._entries):
            upstream = flowing.pop(id(out), None)
            if upstream is None:
                continue
            contributions = backward(upstream)
            for tensor, contribution in zip(inputs, contributions):
                if tensor is None or contribution is None:
                    continue
                key = id(tensor)
                if key in flowing:
                    flowing[key] = flowing[key] + contribution
                else:
                    flowing[key] = contribution
                if tensor.requires_grad:
                    leaves[key] = tensor
        for key, tensor in leaves.items():
            remaining = flowing.get(key)
            if remaining is not None:
                tensor.add_grad(remaining)


_TAPE_STACK: list[Tape] = []


def active_tape() -> Tape | None:
    return _TAPE_STACK[-1] if _TAPE_STACK else None


@contextmanager
def record(tape: Tape | None = None) -> Iterator[Tape]:
    """Context manager that turns on recording for the enclosed forward pass."""
    current = tape if tape is not None else Tape()
    _TAPE_STACK.append(current)
    try:
        yield current
    finally:
        _TAPE_STACK.pop()


def emit(out: Tensor, inputs: Sequence[Tensor], backward: BackwardFn) -> Tensor:
    """Record one primitive application onto the active tape, if any."""
    tape = active_tape()
    if tape is not None:
        tape.record(out, inputs, backward)
    return out


def as_tensor(value, dtype=None) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value, dtype=dtype)
