"""Finite frames of discernment and bitmask power-set combinatorics.

Subsets of an ``n``-element frame are stored as integers in ``[0, 2**n)``:
bit ``i`` is set iff the ``i``-th label belongs to the subset.  Index 0 is
the empty set and ``2**n - 1`` is the whole frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

MAX_FRAME_SIZE = 16


class FrameError(ValueError):
    """Raised for malformed frames, out-of-range subsets or frame mismatches."""


def cardinality(bits: int) -> int:
    """Number of elements in the subset encoded by ``bits``."""
    if bits < 0:
        raise FrameError(f"subset index must be non-negative, got {bits}")
    return bin(bits).count("1")


def binom(a: int, b: int) -> int:
    if not 0 <= b <= a:
        raise FrameError(f"binom({a}, {b}) requires 0 <= b <= a")
    return comb(a, b)


@dataclass(frozen=True)
class Frame:
    """An ordered finite frame of discernment.

    Two frames are equal iff their label sequences are equal.
    """

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(label) for label in labels)
        if not 1 <= len(labels) <= MAX_FRAME_SIZE:
            raise FrameError(f"frame size must be in [1, {MAX_FRAME_SIZE}], got {len(labels)}")
        if any(label == "" for label in labels):
            raise FrameError("frame labels must be non-empty")
        if len(set(labels)) != len(labels):
            raise FrameError(f"frame labels must be unique: {labels}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of_size(cls, n: int) -> Frame:
        """Frame with labels ``"1" .. "n"``."""
        return cls(str(i + 1) for i in range(n))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def size(self) -> int:
        """Number of subsets, ``2**n``."""
        return 1 << self.n

    @property
    def full(self) -> int:
        return self.size - 1

    def __len__(self) -> int:
        return self.n

    def check(self, bits: int) -> int:
        if not 0 <= bits < self.size:
            raise FrameError(f"subset index {bits} out of range for a frame of size {self.n}")
        return bits

    def index(self, subset: int | Iterable[str]) -> int:
        """Bitmask of ``subset``, given either as an index or as an iterable of labels."""
        if isinstance(subset, (int, np.integer)):
            return self.check(int(subset))
        if isinstance(subset, str):
            subset = [subset]
        bits = 0
        lookup = self._positions
        for label in subset:
            try:
                bits |= 1 << lookup[str(label)]
            except KeyError:
                raise FrameError(f"unknown label {label!r}; frame is {self.labels}") from None
        return bits

    def subset_labels(self, bits: int) -> tuple[str, ...]:
        self.check(bits)
        return tuple(label for i, label in enumerate(self.labels) if bits >> i & 1)

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def cardinalities(self) -> np.ndarray:
        """Popcount of every subset index, as an int array of length ``2**n``."""
        idx = np.arange(self.size)
        card = sum((idx >> i) & 1 for i in range(self.n)).astype(np.int64)
        card.setflags(write=False)
        return card

    @cached_property
    def singletons(self) -> tuple[int, ...]:
        return tuple(1 << i for i in range(self.n))

    def layer(self, t: int) -> list[int]:
        """All subsets of cardinality ``t`` in ascending index order."""
        if not 0 <= t <= self.n:
            raise FrameError(f"layer {t} out of range [0, {self.n}]")
        return self._layers[t]

    @cached_property
    def _layers(self) -> tuple[list[int], ...]:
        layers: list[list[int]] = [[] for _ in range(self.n + 1)]
        for bits in range(self.size):
            layers[cardinality(bits)].append(bits)
        return tuple(layers)

    def parents(self, bits: int) -> list[int]:
        """One-element supersets of ``bits`` in ascending index order."""
        self.check(bits)
        return [bits | 1 << i for i in range(self.n) if not bits >> i & 1]

    def complement(self, bits: int) -> int:
        return self.full & ~self.check(bits)

    def require_same(self, other: Frame) -> None:
        if self != other:
            raise FrameError(f"frame mismatch: {self.labels} vs {other.labels}")


def subset_sum(values: np.ndarray, n: int) -> np.ndarray:
    """Zeta transform over subsets: ``out[A] = sum(values[B] for B <= A)``."""
    out = np.array(values, dtype=float, copy=True)
    _transform(out, n, superset=False, sign=1.0)
    return out


def superset_sum(values: np.ndarray, n: int) -> np.ndarray:
    """Zeta transform over supersets: ``out[A] = sum(values[B] for B >= A)``."""
    out = np.array(values, dtype=float, copy=True)
    _transform(out, n, superset=True, sign=1.0)
    return out


def subset_mobius(values: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`subset_sum`."""
    out = np.array(values, dtype=float, copy=True)
    _transform(out, n, superset=False, sign=-1.0)
    return out


def superset_mobius(values: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`superset_sum`."""
    out = np.array(values, dtype=float, copy=True)
    _transform(out, n, superset=True, sign=-1.0)
    return out


def _transform(a: np.ndarray, n: int, superset: bool, sign: float) -> None:
    # in-place Yates butterfly, one bit dimension at a time
    for i in range(n):
        block = a.reshape(-1, 2, 1 << i)
        if superset:
            block[:, 0, :] += sign * block[:, 1, :]
        else:
            block[:, 1, :] += sign * block[:, 0, :]


def parent_sum(values: np.ndarray, n: int) -> np.ndarray:
    """``out[A] = sum(values[A | {i}] for i not in A)``, summing over one-element supersets."""
    values = np.asarray(values, dtype=float)
    out = np.zeros(1 << n)
    for free, parent in _parent_pairs(n):
        out[free] += values[parent]
    return out


@lru_cache(maxsize=None)
def _parent_pairs(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    idx = np.arange(1 << n)
    pairs = []
    for i in range(n):
        free = idx[(idx >> i) & 1 == 0]
        pairs.append((free, free | 1 << i))
    return tuple(pairs)


def subsets_of(bits: int) -> Iterable[int]:
    """All subsets of ``bits`` including the empty set and ``bits`` itself."""
    sub = bits
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & bits


def layer_sizes(n: int) -> Sequence[int]:
    return [comb(n, t) for t in range(n + 1)]
