"""Stratified subsampling and k-fold splitting, both seed-deterministic."""

from __future__ import annotations

import math
from typing import Sequence, TypeVar

import numpy as np

from ..errors import ConfigurationError, InfeasibleSampleError
from .types import Turn

T = TypeVar("T")


def label_quotas(counts: dict[str, int], n: int) -> dict[str, int]:
    """Largest-remainder apportionment of n over the empirical distribution.

    Base quota = floor(n * count/total); the leftover goes to the largest
    fractional remainders, ties broken by the order labels appear in
    `counts`. Quotas always sum to n.
    """
    total = sum(counts.values())
    if n > total:
        raise InfeasibleSampleError(f"cannot sample {n} turns from {total}")
    exact = {label: n * count / total for label, count in counts.items()}
    quotas = {label: math.floor(value) for label, value in exact.items()}
    leftover = n - sum(quotas.values())
    by_remainder = sorted(
        counts.keys(),
        key=lambda label: (-(exact[label] - quotas[label]), list(counts).index(label)),
    )
    for label in by_remainder[:leftover]:
        quotas[label] += 1
    for label, quota in quotas.items():
        if quota > counts[label]:
            raise InfeasibleSampleError(
                f"quota {quota} for label {label!r} exceeds its {counts[label]} available turns"
            )
    return quotas


def stratified_sample(turns: Sequence[Turn], n: int, seed: int) -> list[Turn]:
    """n turns preserving the empirical label distribution.

    Quotas come from largest-remainder apportionment; within each label the
    draw is uniform without replacement. The result keeps dataset order.
    """
    if n > len(turns):
        raise InfeasibleSampleError(f"cannot sample {n} turns from {len(turns)}")
    by_label: dict[str, list[int]] = {}
    for i, turn in enumerate(turns):
        by_label.setdefault(turn.label, []).append(i)
    quotas = label_quotas({label: len(idx) for label, idx in by_label.items()}, n)
    rng = np.random.default_rng(seed)
    chosen: list[int] = []
    for label, indices in by_label.items():
        quota = quotas[label]
        picks = rng.permutation(len(indices))[:quota]
        chosen.extend(indices[p] for p in picks)
    return [turns[i] for i in sorted(chosen)]


def kfold_split(items: Sequence[T], k: int, seed: int) -> list[list[T]]:
    """Shuffle then partition into k folds whose sizes differ by at most one."""
    n = len(items)
    if k < 2:
        raise ConfigurationError(f"k must be at least 2, got {k}")
    if k > n:
        raise ConfigurationError(f"k={k} exceeds dataset size {n}")
    order = np.random.default_rng(seed).permutation(n)
    base, extra = divmod(n, k)
    folds: list[list[T]] = []
    start = 0
    for fold_index in range(k):
        size = base + (1 if fold_index < extra else 0)
        folds.append([items[i] for i in order[start : start + size]])
        start += size
    return folds
