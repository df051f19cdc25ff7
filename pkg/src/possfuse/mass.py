"""Mass functions and their equivalent set-function representations.

A :class:`MassFunction` is a dense vector over the power set of a
:class:`~possfuse.powerset.Frame`.  Unnormalized mass functions are allowed;
``m(∅)`` is exposed as :attr:`MassFunction.empty_mass`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .powerset import (
    Frame,
    subset_mobius,
    subset_sum,
    superset_mobius,
    superset_sum,
)

SUM_TOL = 1e-9
NEG_TOL = 1e-12


class InvalidMassError(ValueError):
    """Raised when an array does not define a valid mass function."""


class PreconditionError(ValueError):
    """Raised when an operation is undefined for the given mass function."""


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    total: float
    negative: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def describe(self, frame: Frame | None = None) -> str:
        if self.ok:
            return "ok"
        parts = []
        if abs(self.total - 1.0) > SUM_TOL:
            parts.append(f"masses sum to {self.total:.12g}, expected 1")
        if self.negative:
            names = [_subset_name(frame, s) for s in self.negative]
            parts.append("negative mass on " + ", ".join(names))
        return "; ".join(parts)


def _subset_name(frame: Frame | None, bits: int) -> str:
    if frame is None:
        return f"#{bits}"
    return "{" + ",".join(frame.subset_labels(bits)) + "}"


def check_masses(values: np.ndarray) -> ValidationReport:
    values = np.asarray(values, dtype=float)
    total = float(values.sum())
    negative = tuple(int(i) for i in np.flatnonzero(values < -NEG_TOL))
    ok = not negative and abs(total - 1.0) <= SUM_TOL and bool(np.all(np.isfinite(values)))
    return ValidationReport(ok, total, negative)


class MassFunction:
    """A basic probability assignment on a finite frame.

    Parameters
    ----------
    frame : Frame
        Frame of discernment.
    masses : array_like
        Dense vector of length ``2**n`` indexed by subset bitmask.
    validate : bool
        Reject vectors that are not valid BPAs (default).  Negative entries
        within ``1e-12`` of zero are clipped to zero.
    """

    __slots__ = ("frame", "masses")

    def __init__(self, frame: Frame, masses: Iterable[float], validate: bool = True):
        arr = np.array(masses, dtype=float)
        if arr.shape != (frame.size,):
            raise InvalidMassError(f"expected {frame.size} masses for a frame of size {frame.n}, got shape {arr.shape}")
        if validate:
            report = check_masses(arr)
            if not report:
                raise InvalidMassError(report.describe(frame))
            arr[arr < 0] = 0.0
        arr.setflags(write=False)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "masses", arr)

    def __setattr__(self, name, value):
        raise AttributeError("MassFunction is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_dict(cls, frame: Frame, masses: Mapping) -> MassFunction:
        """Build from a mapping of subsets (bitmask or label iterable) to masses."""
        arr = np.zeros(frame.size)
        for key, value in masses.items():
            arr[frame.index(key)] += float(value)
        return cls(frame, arr)

    @classmethod
    def vacuous(cls, frame: Frame) -> MassFunction:
        arr = np.zeros(frame.size)
        arr[frame.full] = 1.0
        return cls(frame, arr)

    @classmethod
    def empty(cls, frame: Frame) -> MassFunction:
        arr = np.zeros(frame.size)
        arr[0] = 1.0
        return cls(frame, arr)

    @classmethod
    def bayesian(cls, frame: Frame, probs: Iterable[float]) -> MassFunction:
        probs = np.asarray(list(probs), dtype=float)
        if probs.shape != (frame.n,):
            raise InvalidMassError(f"expected {frame.n} probabilities, got {probs.shape}")
        arr = np.zeros(frame.size)
        arr[list(frame.singletons)] = probs
        return cls(frame, arr)

    # -- basic accessors --------------------------------------------------

    def __getitem__(self, subset) -> float:
        return float(self.masses[self.frame.index(subset)])

    def __len__(self) -> int:
        return self.frame.size

    def __repr__(self) -> str:
        body = ", ".join(f"{v:.4g}" for v in self.masses)
        return f"MassFunction({list(self.frame.labels)}, [{body}])"

    def __eq__(self, other) -> bool:
        if not isinstance(other, MassFunction):
            return NotImplemented
        return self.frame == other.frame and np.array_equal(self.masses, other.masses)

    def __hash__(self):
        return hash((self.frame, self.masses.tobytes()))

    def allclose(self, other: MassFunction, atol: float = 1e-9) -> bool:
        return self.frame == other.frame and bool(np.allclose(self.masses, other.masses, rtol=0, atol=atol))

    @property
    def empty_mass(self) -> float:
        return float(self.masses[0])

    def focal_sets(self, tol: float = 0.0) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.masses > tol)]

    def normalized(self) -> np.ndarray:
        """``m(F) / (1 - m(∅))`` for ``F ≠ ∅`` with a zero in slot 0."""
        e = self.empty_mass
        if e >= 1.0:
            raise PreconditionError("the empty mass function has no normalized form")
        out = self.masses / (1.0 - e)
        out[0] = 0.0
        return out

    # -- predicates -------------------------------------------------------

    def is_bayesian(self, tol: float = 0.0) -> bool:
        card = self.frame.cardinalities
        return bool(np.all(np.abs(self.masses[card != 1]) <= tol))

    def is_vacuous(self, tol: float = 0.0) -> bool:
        return abs(self.masses[self.frame.full] - 1.0) <= tol

    def is_empty(self, tol: float = 0.0) -> bool:
        return abs(self.masses[0] - 1.0) <= tol

    def is_dogmatic(self, tol: float = 0.0) -> bool:
        return self.masses[self.frame.full] <= tol

    def is_consonant(self, tol: float = 0.0) -> bool:
        focal = [f for f in self.focal_sets(tol) if f]
        focal.sort(key=lambda f: bin(f).count("1"))
        return all(a & b == a for a, b in zip(focal, focal[1:]))


def validate(m: MassFunction | np.ndarray, frame: Frame | None = None) -> ValidationReport:
    """Check non-negativity and unit total of a mass vector."""
    values = m.masses if isinstance(m, MassFunction) else np.asarray(m, dtype=float)
    return check_masses(values)


# -- Eq. (1) representations ---------------------------------------------------


def belief_vector(m: MassFunction) -> np.ndarray:
    """``Bel(F) = sum of m(G) for ∅ ≠ G ⊆ F``."""
    values = m.masses.copy()
    values[0] = 0.0
    return subset_sum(values, m.frame.n)


def implicability_vector(m: MassFunction) -> np.ndarray:
    """``b(F) = Bel(F) + m(∅)``."""
    return subset_sum(m.masses, m.frame.n)


def plausibility_vector(m: MassFunction) -> np.ndarray:
    frame = m.frame
    b = implicability_vector(m)
    comp = frame.full ^ np.arange(frame.size)
    return 1.0 - b[comp]


def commonality_vector(m: MassFunction) -> np.ndarray:
    return superset_sum(m.masses, m.frame.n)


def bel(m: MassFunction, subset) -> float:
    return float(belief_vector(m)[m.frame.index(subset)])


def b(m: MassFunction, subset) -> float:
    return float(implicability_vector(m)[m.frame.index(subset)])


def pl(m: MassFunction, subset) -> float:
    return float(plausibility_vector(m)[m.frame.index(subset)])


def q(m: MassFunction, subset) -> float:
    return float(commonality_vector(m)[m.frame.index(subset)])


def mass_from_commonality(frame: Frame, commonality: np.ndarray, validate: bool = True) -> MassFunction:
    return MassFunction(frame, superset_mobius(commonality, frame.n), validate=validate)


def mass_from_implicability(frame: Frame, implicability: np.ndarray, validate: bool = True) -> MassFunction:
    return MassFunction(frame, subset_mobius(implicability, frame.n), validate=validate)


# -- canonical decomposition -----------------------------------------------------


@dataclass(frozen=True)
class WeightFunction:
    """Canonical-decomposition weights.

    ``kind == "sigma"`` holds conjunctive weights on every ``F ⊂ Ω``
    (slot ``Ω`` is 1 and unused); ``kind == "v"`` holds disjunctive weights on
    every ``F ≠ ∅`` (slot 0 is 1 and unused).  Weights may exceed one.
    """

    frame: Frame
    kind: str
    weights: np.ndarray

    def __getitem__(self, subset) -> float:
        return float(self.weights[self.frame.index(subset)])


def weight_sigma(m: MassFunction) -> WeightFunction:
    """Conjunctive weights ``σ(F) = Π_{G ⊇ F} q(G)^(-(-1)^(|G|-|F|))``."""
    if m.is_dogmatic():
        raise PreconditionError("conjunctive weights need a non-dogmatic mass function (m(Ω) > 0)")
    frame = m.frame
    log_q = np.log(commonality_vector(m))
    log_sigma = -superset_mobius(log_q, frame.n)
    log_sigma[frame.full] = 0.0
    return WeightFunction(frame, "sigma", np.exp(log_sigma))


def weight_v(m: MassFunction) -> WeightFunction:
    """Disjunctive weights ``v(F) = Π_{G ⊆ F} b(G)^(-(-1)^(|F|-|G|))``."""
    if m.empty_mass <= 0.0:
        raise PreconditionError("disjunctive weights need an unnormalized mass function (m(∅) > 0)")
    frame = m.frame
    log_b = np.log(implicability_vector(m))
    log_v = -subset_mobius(log_b, frame.n)
    log_v[0] = 0.0
    return WeightFunction(frame, "v", np.exp(log_v))


def mass_from_sigma(w: WeightFunction, validate: bool = True) -> MassFunction:
    """Conjunctive combination of the simple mass functions ``F^σ(F)``.

    ``F^σ`` has commonality ``1`` on subsets of ``F`` and ``σ`` elsewhere, so
    the combined commonality is ``q(A) = Π_{F ⊉ A} σ(F)``.
    """
    if w.kind != "sigma":
        raise ValueError("expected conjunctive weights")
    frame = w.frame
    log_sigma = np.log(w.weights)
    log_sigma[frame.full] = 0.0
    total = log_sigma.sum()
    # sum over F ⊇ A of log σ(F) is a superset sum
    log_q = total - superset_sum(log_sigma, frame.n)
    return mass_from_commonality(frame, np.exp(log_q), validate=validate)


def mass_from_v(w: WeightFunction, validate: bool = True) -> MassFunction:
    """Disjunctive combination of the simple mass functions ``F_v(F)``.

    ``F_v`` has implicability ``1`` on supersets of ``F`` and ``v`` elsewhere,
    so ``b(A) = Π_{F ⊄ A} v(F)``.
    """
    if w.kind != "v":
        raise ValueError("expected disjunctive weights")
    frame = w.frame
    log_v = np.log(w.weights)
    log_v[0] = 0.0
    total = log_v.sum()
    log_b = total - subset_sum(log_v, frame.n)
    return mass_from_implicability(frame, np.exp(log_b), validate=validate)


def simple_sigma(frame: Frame, subset, sigma: float) -> MassFunction:
    """The simple mass function ``{m(F) = 1 - σ, m(Ω) = σ}`` (unchecked if σ > 1)."""
    arr = np.zeros(frame.size)
    f = frame.index(subset)
    arr[f] += 1.0 - sigma
    arr[frame.full] += sigma
    return MassFunction(frame, arr, validate=sigma <= 1.0)


def simple_v(frame: Frame, subset, v: float) -> MassFunction:
    """The dual simple mass function ``{m(F) = 1 - v, m(∅) = v}``."""
    arr = np.zeros(frame.size)
    f = frame.index(subset)
    arr[f] += 1.0 - v
    arr[0] += v
    return MassFunction(frame, arr, validate=v <= 1.0)


# -- pignistic transformation ------------------------------------------------------


@dataclass(frozen=True)
class PignisticDistribution:
    """Normalized pignistic probability ``p`` over singletons, plus ``e = m(∅)``."""

    frame: Frame
    p: np.ndarray
    e: float = 0.0

    def __getitem__(self, label) -> float:
        bits = self.frame.index(label)
        return float(self.p[bits.bit_length() - 1])


def _spread(m_values: np.ndarray, frame: Frame) -> np.ndarray:
    card = frame.cardinalities
    share = np.zeros(frame.size)
    nz = card > 0
    share[nz] = m_values[nz] / card[nz]
    idx = np.arange(frame.size)
    return np.array([share[(idx >> i) & 1 == 1].sum() for i in range(frame.n)])


def betp(m: MassFunction) -> PignisticDistribution:
    """Normalized pignistic transformation ``BetP^N``."""
    if m.empty_mass >= 1.0:
        raise PreconditionError("the empty mass function has no normalized pignistic probability")
    p = _spread(m.normalized(), m.frame)
    return PignisticDistribution(m.frame, p, m.empty_mass)


def betp_unnormalized(m: MassFunction) -> np.ndarray:
    """``BetP_m(ω) = Σ_{ω ∈ F} m(F)/|F|`` without dividing by ``1 - m(∅)``."""
    return _spread(m.masses, m.frame)


def possibility_from_pignistic(p) -> np.ndarray:
    """Consonant possibility ``Poss(ω_i) = Σ_j min(p(ω_i), p(ω_j))``."""
    probs = p.p if isinstance(p, PignisticDistribution) else np.asarray(p, dtype=float)
    out = np.minimum.outer(probs, probs).sum(axis=1)
    # rows of the most probable elements sum the whole of p; pin them to 1
    out[probs == probs.max()] = 1.0
    return np.clip(out, 0.0, 1.0)


# -- scalar summaries ---------------------------------------------------------------


def ignorance(m: MassFunction) -> float:
    """``Ign(m) = Σ_{F ≠ ∅} m(F)|F|``."""
    return float(np.dot(m.masses, m.frame.cardinalities))


def pignistic_entropy(m: MassFunction) -> float:
    """Shannon entropy in bits of ``BetP^N``."""
    p = betp(m).p
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())
