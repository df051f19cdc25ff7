"""Combination rules: the possibilistic rule and classical baselines.

The possibilistic rule (:func:`pecr`) fuses mass functions in their
relative-representation space: singleton propensities are discounted by
``1 - m(∅)`` and aggregated by a propensity operator, higher layers are
aggregated by a commitment operator, and the result is reconstructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable, Sequence

import numpy as np

from .isopignistic import RelativeRepresentation, reconstruct, relativize
from .mass import (
    MassFunction,
    PreconditionError,
    WeightFunction,
    mass_from_sigma,
    mass_from_v,
    weight_sigma,
    weight_v,
)
from .operators import MAX, MEAN, MIN, Operator, fold
from .powerset import Frame

LEQ_TOL = 1e-10


class TotalConflictError(PreconditionError):
    """Dempster normalization is undefined when the conjunctive conflict is one."""


@dataclass(frozen=True)
class FusionConfig:
    """Propensity and commitment operators of one possibilistic rule."""

    propensity: Operator
    commitment: Operator

    def __post_init__(self):
        if isinstance(self.propensity, str):
            object.__setattr__(self, "propensity", Operator.parse(self.propensity))
        if isinstance(self.commitment, str):
            object.__setattr__(self, "commitment", Operator.parse(self.commitment))
        if self.propensity.kind == MEAN:
            raise ValueError("the propensity operator must be a t-norm or a t-conorm")

    @property
    def associative(self) -> bool:
        return self.propensity.associative and self.commitment.associative

    @property
    def name(self) -> str:
        return f"pecr:{self.propensity.spec}:{self.commitment.spec}"


@dataclass(frozen=True)
class FusedDiagnostics:
    """Intermediate quantities of a possibilistic fusion.

    ``raw_propensity`` is the fused singleton profile before normalization by
    its height; the fused empty mass is ``1 - height``.
    """

    raw_propensity: np.ndarray
    height: float
    conflict: float
    relative: RelativeRepresentation | None

    def commitment_layer(self, t: int) -> np.ndarray | None:
        """Fused layer ``t`` profile, or ``None`` when the result is the empty BPA."""
        return None if self.relative is None else self.relative.layer(t)


def _common_frame(masses: Sequence) -> Frame:
    if len(masses) < 1:
        raise ValueError("need at least one source")
    frame = masses[0].frame
    for m in masses[1:]:
        frame.require_same(m.frame)
    return frame


def propensity_fuse(reps: Sequence[RelativeRepresentation], op: Operator) -> np.ndarray:
    """Pointwise aggregation of the discounted singleton profiles ``(1 - e) π^(1)``."""
    _common_frame(reps)
    profiles = np.array([(1.0 - r.empty_mass) * r.propensity for r in reps])
    return np.asarray(fold(op, np.clip(profiles, 0.0, 1.0)))


def commitment_fuse(reps: Sequence[RelativeRepresentation], op: Operator, t: int) -> np.ndarray:
    """Pointwise aggregation of layer ``t >= 2`` of every source (no discounting)."""
    frame = _common_frame(reps)
    if not 2 <= t <= frame.n:
        raise ValueError(f"commitment layers run from 2 to {frame.n}, got {t}")
    return np.asarray(fold(op, np.array([r.layer(t) for r in reps])))


def fuse_relative(reps: Sequence[RelativeRepresentation], cfg: FusionConfig) -> tuple[RelativeRepresentation | None, np.ndarray]:
    """Fused relative representation and raw propensity profile.

    Returns ``(None, raw)`` when the raw profile has zero height, in which
    case the fused mass function is the empty one.
    """
    frame = _common_frame(reps)
    raw = propensity_fuse(reps, cfg.propensity)
    height = float(raw.max())
    if height <= 0.0:
        return None, raw
    values = np.zeros(frame.size)
    values[0] = 1.0 - height
    values[list(frame.singletons)] = np.minimum(raw / height, 1.0)
    for t in range(2, frame.n + 1):
        values[frame.layer(t)] = commitment_fuse(reps, cfg.commitment, t)
    return RelativeRepresentation(frame, values), raw


def pecr(sources: Sequence[MassFunction], cfg: FusionConfig) -> tuple[MassFunction, FusedDiagnostics]:
    """Possibilistic evidence combination of two or more mass functions.

    Operators are applied as k-ary folds in source order; the mean is taken
    over all sources at once.
    """
    if len(sources) < 2:
        raise ValueError("possibilistic combination needs at least two sources")
    frame = _common_frame(sources)
    reps = [relativize(m) for m in sources]
    fused, raw = fuse_relative(reps, cfg)
    height = float(raw.max())
    if fused is None:
        diag = FusedDiagnostics(raw, height, 1.0, None)
        return MassFunction.empty(frame), diag
    m = reconstruct(fused)
    return m, FusedDiagnostics(raw, height, 1.0 - height, fused)


def combine(*sources: MassFunction, propensity="product", commitment="max") -> MassFunction:
    """Shorthand for ``pecr(sources, FusionConfig(propensity, commitment))[0]``."""
    return pecr(sources, FusionConfig(propensity, commitment))[0]


# -- classical rules -----------------------------------------------------------------


def _convolve(m1: MassFunction, m2: MassFunction, op: Callable) -> np.ndarray:
    frame = _common_frame([m1, m2])
    a = np.asarray(m1.focal_sets())
    b = np.asarray(m2.focal_sets())
    out = np.zeros(frame.size)
    if a.size == 0 or b.size == 0:
        return out
    idx = op(a[:, None], b[None, :])
    w = np.outer(m1.masses[a], m2.masses[b])
    np.add.at(out, idx.ravel(), w.ravel())
    return out


def ccr(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Unnormalized conjunctive rule: ``m(F) = Σ_{A ∩ B = F} m1(A) m2(B)``."""
    return MassFunction(m1.frame, _convolve(m1, m2, np.bitwise_and))


def dcr(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Disjunctive rule: ``m(F) = Σ_{A ∪ B = F} m1(A) m2(B)``."""
    return MassFunction(m1.frame, _convolve(m1, m2, np.bitwise_or))


def dempster(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Normalized conjunctive rule."""
    out = _convolve(m1, m2, np.bitwise_and)
    conflict = out[0]
    if conflict >= 1.0 - 1e-15:
        raise TotalConflictError("Dempster's rule is undefined for totally conflicting sources")
    out[0] = 0.0
    return MassFunction(m1.frame, out / (1.0 - conflict))


def yager(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Conjunctive rule with the conflicting mass moved to ``Ω``."""
    out = _convolve(m1, m2, np.bitwise_and)
    out[m1.frame.full] += out[0]
    out[0] = 0.0
    return MassFunction(m1.frame, out)


def dubois_prade(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Each conflicting product ``m1(A) m2(B)`` with ``A ∩ B = ∅`` goes to ``A ∪ B``."""
    frame = _common_frame([m1, m2])
    a = np.asarray(m1.focal_sets())
    b = np.asarray(m2.focal_sets())
    inter = a[:, None] & b[None, :]
    union = a[:, None] | b[None, :]
    target = np.where(inter == 0, union, inter)
    w = np.outer(m1.masses[a], m2.masses[b])
    out = np.zeros(frame.size)
    np.add.at(out, target.ravel(), w.ravel())
    return MassFunction(frame, out)


def _min_weights(w1: WeightFunction, w2: WeightFunction) -> WeightFunction:
    return WeightFunction(w1.frame, w1.kind, np.minimum(w1.weights, w2.weights))


def caucr(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Cautious rule: conjunctive combination of ``F^min(σ1(F), σ2(F))``.

    Only defined for non-dogmatic inputs (``m(Ω) > 0``).
    """
    _common_frame([m1, m2])
    if m1.is_dogmatic() or m2.is_dogmatic():
        raise PreconditionError("the cautious rule requires non-dogmatic sources (m(Ω) > 0)")
    return mass_from_sigma(_min_weights(weight_sigma(m1), weight_sigma(m2)))


def bcr(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Bold rule: disjunctive combination of ``F_min(v1(F), v2(F))``.

    Only defined for unnormalized inputs (``m(∅) > 0``).
    """
    _common_frame([m1, m2])
    if m1.empty_mass <= 0.0 or m2.empty_mass <= 0.0:
        raise PreconditionError("the bold rule requires unnormalized sources (m(∅) > 0)")
    return mass_from_v(_min_weights(weight_v(m1), weight_v(m2)))


def combine_all(rule: Callable[[MassFunction, MassFunction], MassFunction], sources: Sequence[MassFunction]) -> MassFunction:
    """Left fold of a binary rule over ``sources``."""
    if not sources:
        raise ValueError("need at least one source")
    return reduce(rule, sources)


BINARY_RULES: dict[str, Callable[[MassFunction, MassFunction], MassFunction]] = {
    "ccr": ccr,
    "dcr": dcr,
    "dempster": dempster,
    "yager": yager,
    "dp": dubois_prade,
    "caucr": caucr,
    "bcr": bcr,
}


# -- orderings -------------------------------------------------------------------------


def informative_leq(m_a: MassFunction, m_b: MassFunction, tol: float = LEQ_TOL) -> bool:
    """Layer-wise possibilistic ordering ``m_a ⊑ m_b``.

    Discounted singleton profiles and every commitment layer of ``m_a`` must
    be pointwise below those of ``m_b``.
    """
    frame = _common_frame([m_a, m_b])
    ra, rb = relativize(m_a), relativize(m_b)
    if np.any((1.0 - ra.empty_mass) * ra.propensity > (1.0 - rb.empty_mass) * rb.propensity + tol):
        return False
    upper = frame.cardinalities >= 2
    return bool(np.all(ra.values[upper] <= rb.values[upper] + tol))


IDEMPOTENT_CONFIGS = (FusionConfig(MIN, MIN), FusionConfig(MAX, MAX))
