"""Isopignistic decomposition of mass functions and its relative form.

The pipeline is::

    m  --decompose-->  I_m  --relativize-->  Ĩ_m  --reconstruct-->  m

``I_m`` keeps the empty mass, the possibility distribution induced by the
pignistic probability, and for every ``|F| >= 2`` the refinement flow through
``F``.  ``Ĩ_m`` rescales each commitment layer by the capacity of the layer
below it, so that *any* ``[0, 1]``-valued profile with a normal singleton
layer maps back to a valid mass function.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mass import (
    InvalidMassError,
    MassFunction,
    PreconditionError,
    betp,
    possibility_from_pignistic,
)
from .powerset import Frame, parent_sum, superset_sum

NORMAL_TOL = 1e-9
ISO_TOL = 1e-8
CLIP_TOL = 1e-12


@dataclass(frozen=True)
class IsopignisticFunction:
    """Dense ``I_m``: ``I(∅) = e``, singletons hold ``Poss``, larger sets hold commitment."""

    frame: Frame
    values: np.ndarray

    def __getitem__(self, subset) -> float:
        return float(self.values[self.frame.index(subset)])

    @property
    def empty_mass(self) -> float:
        return float(self.values[0])

    @property
    def propensity(self) -> np.ndarray:
        return self.values[list(self.frame.singletons)]


@dataclass(frozen=True)
class RelativeRepresentation:
    """Layer-wise possibilistic profile ``Ĩ`` with every value in ``[0, 1]``.

    ``scales`` holds the per-layer activation coefficients computed while
    relativizing a mass function (empty when built directly from values).
    """

    frame: Frame
    values: np.ndarray
    scales: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.frame.size,):
            raise ValueError(f"expected {self.frame.size} values, got shape {values.shape}")
        if np.any(values < 0.0) or np.any(values > 1.0) or not np.all(np.isfinite(values)):
            raise ValueError("relative representation values must lie in [0, 1]")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __getitem__(self, subset) -> float:
        return float(self.values[self.frame.index(subset)])

    @property
    def empty_mass(self) -> float:
        return float(self.values[0])

    def layer(self, t: int) -> np.ndarray:
        """``π^(t)``: the values on cardinality layer ``t`` in ascending index order."""
        return self.values[self.frame.layer(t)]

    @property
    def propensity(self) -> np.ndarray:
        return self.layer(1)


@dataclass(frozen=True)
class ZetaFunction:
    """Signed refinement flows; zero on sets of cardinality at most one."""

    frame: Frame
    values: np.ndarray

    def __getitem__(self, subset) -> float:
        return float(self.values[self.frame.index(subset)])

    def __neg__(self) -> ZetaFunction:
        return ZetaFunction(self.frame, -self.values)


# -- decomposition --------------------------------------------------------------


def _commitment(frame: Frame, mbar: np.ndarray) -> np.ndarray:
    """``Σ_{A ⊇ F} m̄(A) / C(|A|, |F|)`` for every ``|F| >= 2``; zero elsewhere."""
    from math import comb

    card = frame.cardinalities
    out = np.zeros(frame.size)
    for t in range(2, frame.n + 1):
        divisor = np.array([comb(int(k), t) if k >= t else 0 for k in range(frame.n + 1)], dtype=float)
        weights = np.zeros(frame.size)
        mask = card >= t
        weights[mask] = mbar[mask] / divisor[card[mask]]
        sums = superset_sum(weights, frame.n)
        layer = card == t
        out[layer] = sums[layer]
    return out


def decompose(m: MassFunction) -> IsopignisticFunction:
    """Isopignistic canonical decomposition ``I_m`` of ``m``."""
    frame = m.frame
    values = np.zeros(frame.size)
    e = m.empty_mass
    values[0] = e
    if e >= 1.0:
        return IsopignisticFunction(frame, values)
    mbar = m.normalized()
    values += _commitment(frame, mbar)
    values[list(frame.singletons)] = possibility_from_pignistic(betp(m))
    return IsopignisticFunction(frame, values)


def probability_from_possibility(pi) -> np.ndarray:
    """Left inverse of :func:`~possfuse.mass.possibility_from_pignistic`.

    ``pi`` must be normal (maximum one).  Ties can be sorted in any order
    since their difference terms vanish.
    """
    pi = np.asarray(pi, dtype=float)
    if pi.ndim != 1 or pi.size == 0:
        raise PreconditionError("possibility profile must be a non-empty vector")
    if np.any(pi < -NORMAL_TOL) or np.any(pi > 1.0 + NORMAL_TOL):
        raise PreconditionError("possibility values must lie in [0, 1]")
    if abs(pi.max() - 1.0) > NORMAL_TOL:
        raise PreconditionError(f"possibility profile is not normal: max = {pi.max():.12g}")
    n = pi.size
    order = np.argsort(-pi, kind="stable")
    srt = pi[order]
    p_sorted = np.empty(n)
    p_sorted[n - 1] = srt[n - 1] / n
    for r in range(n - 2, -1, -1):
        # r is zero-based, the recurrence divides by the one-based rank
        p_sorted[r] = p_sorted[r + 1] + (srt[r] - srt[r + 1]) / (r + 1)
    p = np.empty(n)
    p[order] = p_sorted
    return p


# -- isopignistic transformation ----------------------------------------------


def _parent_flow(frame: Frame, values: np.ndarray) -> np.ndarray:
    """``Σ_{G ∈ Par(F)} values(G) / |G|`` for every ``F``."""
    card = frame.cardinalities
    share = np.divide(values, card, out=np.zeros(frame.size), where=card > 0)
    return parent_sum(share, frame.n)


def zeta(m1: MassFunction, m2: MassFunction) -> ZetaFunction:
    """Trans-isopignistic function carrying ``m1`` onto ``m2``.

    Both mass functions must share the empty mass and the normalized
    pignistic probability.  The flows are solved top-down from ``Ω``.
    """
    frame = m1.frame
    frame.require_same(m2.frame)
    if abs(m1.empty_mass - m2.empty_mass) > ISO_TOL:
        raise PreconditionError(
            f"mass functions are not isopignistic: empty masses {m1.empty_mass:.6g} vs {m2.empty_mass:.6g}"
        )
    if m1.empty_mass < 1.0:
        dev = float(np.max(np.abs(betp(m1).p - betp(m2).p)))
        if dev > ISO_TOL:
            raise PreconditionError(f"mass functions are not isopignistic: max pignistic deviation {dev:.3g}")
    card = frame.cardinalities
    z = np.zeros(frame.size)
    for t in range(frame.n, 1, -1):
        for f in frame.layer(t):
            inflow = sum(z[g] / card[g] for g in frame.parents(f))
            z[f] = m1.masses[f] + inflow - m2.masses[f]
    return ZetaFunction(frame, z)


def apply_zeta(m: MassFunction, z: ZetaFunction) -> MassFunction:
    """Move ``m`` inside its isopignistic domain along the flows ``z``."""
    frame = m.frame
    frame.require_same(z.frame)
    zv = np.array(z.values, dtype=float)
    zv[frame.cardinalities <= 1] = 0.0
    out = m.masses - zv + _parent_flow(frame, zv)
    out[0] = m.masses[0]
    bad = np.flatnonzero(out < -CLIP_TOL)
    if bad.size:
        names = ", ".join("{" + ",".join(frame.subset_labels(int(f))) + "}" for f in bad)
        raise InvalidMassError(f"transformation yields negative mass on {names}")
    return MassFunction(frame, np.maximum(out, 0.0))


# -- relative function and reconstruction ---------------------------------------------


def _bottleneck_ratio(frame: Frame, t: int, transmit: np.ndarray, parent_totals: np.ndarray) -> float | None:
    """Smallest ``transmit(F) / Σ_Par profile(G)`` over active channels of layer ``t``.

    ``parent_totals`` is :func:`~possfuse.powerset.parent_sum` of the profile.
    Returns ``None`` when every channel of the layer is inactive.
    """
    layer = frame.layer(t)
    denom = parent_totals[layer]
    active = denom > 0.0
    if not np.any(active):
        return None
    return float(np.min(transmit[layer][active] / denom[active]))


def relativize(m: MassFunction) -> RelativeRepresentation:
    """Isopignistic relative function ``Ĩ_m``."""
    frame = m.frame
    iso = decompose(m).values
    out = np.zeros(frame.size)
    out[0] = iso[0]
    if m.empty_mass >= 1.0:
        return RelativeRepresentation(frame, out, tuple(0.0 for _ in range(frame.n - 1)))
    singles = list(frame.singletons)
    out[singles] = iso[singles]
    transmit = iso.copy()
    transmit[singles] = betp(m).p
    totals = parent_sum(iso, frame.n)
    scales = []
    for t in range(1, frame.n):
        upper = frame.layer(t + 1)
        ratio = _bottleneck_ratio(frame, t, transmit, totals)
        top = float(iso[upper].max())
        if ratio is None or ratio <= 0.0 or top <= 0.0:
            scales.append(0.0)
            continue
        s = min(1.0 / ((t + 1) * ratio), 1.0)
        scales.append(s)
        out[upper] = s * iso[upper] / top
    return RelativeRepresentation(frame, np.clip(out, 0.0, 1.0), tuple(scales))


def compose_vector(frame: Frame, iso: np.ndarray, p: np.ndarray | None = None) -> np.ndarray:
    """Mass vector recovered from an isopignistic function without any check.

    The singleton row uses the pignistic probability ``p`` (recovered from
    the singleton possibilities when omitted) since that is what the
    singleton layer transmits upward.
    """
    iso = np.asarray(iso, dtype=float)
    e = float(iso[0])
    singles = list(frame.singletons)
    if p is None:
        p = probability_from_possibility(iso[singles])
    transmit = iso.copy()
    transmit[singles] = p
    transmit[0] = 0.0
    mbar = transmit - _parent_flow(frame, iso)
    mbar[0] = 0.0
    out = (1.0 - e) * mbar
    out[0] = e
    return out


def compose(iso: IsopignisticFunction) -> MassFunction:
    """Invert :func:`decompose`; raises if the values are not admissible."""
    if iso.empty_mass >= 1.0:
        return MassFunction.empty(iso.frame)
    return _finish(iso.frame, compose_vector(iso.frame, iso.values))


def _finish(frame: Frame, out: np.ndarray) -> MassFunction:
    bad = np.flatnonzero(out < -CLIP_TOL)
    if bad.size:
        names = ", ".join("{" + ",".join(frame.subset_labels(int(f))) + "}" for f in bad)
        raise InvalidMassError(f"reconstruction yields negative mass on {names}")
    out = np.maximum(out, 0.0)
    return MassFunction(frame, out)


def reconstruct(rel: RelativeRepresentation) -> MassFunction:
    """Rebuild a valid mass function from a relative representation.

    Requires ``Ĩ(∅) ∈ [0, 1]`` and, unless ``Ĩ(∅) = 1``, a singleton layer
    with maximum one.
    """
    frame = rel.frame
    values = rel.values
    e = float(values[0])
    if e >= 1.0:
        return MassFunction.empty(frame)
    singles = list(frame.singletons)
    p = probability_from_possibility(values[singles])
    iso = np.zeros(frame.size)
    iso[0] = e
    iso[singles] = values[singles]
    transmit = iso.copy()
    transmit[singles] = p
    totals = parent_sum(values, frame.n)
    for t in range(1, frame.n):
        upper = frame.layer(t + 1)
        ratio = _bottleneck_ratio(frame, t, transmit, totals)
        top = float(values[upper].max())
        if ratio is None or ratio <= 0.0 or top <= 0.0:
            continue
        iso[upper] = (t + 1) * ratio * values[upper] * top
        transmit[upper] = iso[upper]
    return _finish(frame, compose_vector(frame, iso, p))
