"""Triangular norms, conorms and the arithmetic mean on ``[0, 1]``.

Operators are small immutable objects.  Parametric families are normalized at
construction: Frank with ``λ = 1`` is the product and ``λ = 0`` the minimum;
Hamacher with ``γ = 1`` is the product.

>>> Operator.parse("frank:0.5")(0.3, 0.6) < min(0.3, 0.6)
True
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

TNORM = "t-norm"
TCONORM = "t-conorm"
MEAN = "mean"

_KINDS = {
    "minimum": TNORM,
    "product": TNORM,
    "lukasiewicz": TNORM,
    "frank": TNORM,
    "hamacher": TNORM,
    "maximum": TCONORM,
    "probabilistic-sum": TCONORM,
    "bounded-sum": TCONORM,
    "frank-conorm": TCONORM,
    "hamacher-conorm": TCONORM,
    "arithmetic-mean": MEAN,
}

_PARAMETRIC = {"frank", "frank-conorm", "hamacher", "hamacher-conorm"}

_DUALS = {
    "minimum": "maximum",
    "product": "probabilistic-sum",
    "lukasiewicz": "bounded-sum",
    "frank": "frank-conorm",
    "hamacher": "hamacher-conorm",
}
_DUALS.update({v: k for k, v in _DUALS.items()})

# names accepted by Operator.parse
ALIASES = {
    "min": "minimum",
    "minimum": "minimum",
    "product": "product",
    "prod": "product",
    "lukasiewicz": "lukasiewicz",
    "max": "maximum",
    "maximum": "maximum",
    "probsum": "probabilistic-sum",
    "boundedsum": "bounded-sum",
    "mean": "arithmetic-mean",
    "avg": "arithmetic-mean",
    "frank": "frank",
    "frank-conorm": "frank-conorm",
    "hamacher": "hamacher",
    "hamacher-conorm": "hamacher-conorm",
}


_PROBE = np.array([0.0, 0.13, 0.5, 0.87, 1.0])


class OperatorError(ValueError):
    """Raised for unknown families, bad parameters or out-of-range arguments."""


@dataclass(frozen=True)
class Operator:
    """A binary aggregator on the unit interval.

    Parameters
    ----------
    family : str
        One of ``minimum, product, lukasiewicz, maximum, probabilistic-sum,
        bounded-sum, frank, hamacher, frank-conorm, hamacher-conorm,
        arithmetic-mean``.
    parameter : float, optional
        Frank ``λ > 0`` or Hamacher ``γ >= 0``; required iff the family is
        parametric.
    """

    family: str
    parameter: float | None = None

    def __post_init__(self):
        family = self.family
        if family not in _KINDS:
            raise OperatorError(f"unknown operator family {family!r}")
        p = self.parameter
        if family in _PARAMETRIC:
            if p is None:
                raise OperatorError(f"{family} needs a parameter")
            p = float(p)
            if family.startswith("frank"):
                if not p >= 0.0 or not np.isfinite(p):
                    raise OperatorError(f"Frank parameter must be a finite λ > 0, got {p}")
                if p == 1.0:
                    family, p = ("product" if family == "frank" else "probabilistic-sum"), None
                elif p == 0.0:
                    family, p = ("minimum" if family == "frank" else "maximum"), None
            else:
                if not p >= 0.0 or not np.isfinite(p):
                    raise OperatorError(f"Hamacher parameter must be a finite γ >= 0, got {p}")
                if p == 1.0:
                    family, p = ("product" if family == "hamacher" else "probabilistic-sum"), None
        elif p is not None:
            raise OperatorError(f"{family} takes no parameter")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "parameter", p)
        if self.kind != MEAN:
            neutral = 1.0 if self.is_tnorm else 0.0
            if np.any(np.abs(_apply(self, _PROBE, neutral) - _PROBE) > 1e-12):
                raise OperatorError(f"{self.spec} fails its neutral element {neutral:g}")

    @classmethod
    def parse(cls, text: str) -> Operator:
        """Parse ``name`` or ``name:param`` (e.g. ``"frank:0.5"``, ``"probsum"``)."""
        name, _, arg = text.strip().partition(":")
        family = ALIASES.get(name.strip().lower())
        if family is None:
            raise OperatorError(f"unknown operator {text!r}; expected one of {sorted(ALIASES)}")
        if family in _PARAMETRIC:
            if not arg:
                raise OperatorError(f"operator {name!r} needs a parameter, e.g. {name}:0.5")
            try:
                value = float(arg)
            except ValueError:
                raise OperatorError(f"bad parameter in {text!r}") from None
            return cls(family, value)
        if arg:
            raise OperatorError(f"operator {name!r} takes no parameter")
        return cls(family)

    @property
    def kind(self) -> str:
        return _KINDS[self.family]

    @property
    def is_tnorm(self) -> bool:
        return self.kind == TNORM

    @property
    def is_tconorm(self) -> bool:
        return self.kind == TCONORM

    @property
    def associative(self) -> bool:
        return self.kind != MEAN

    @property
    def idempotent(self) -> bool:
        return self.family in ("minimum", "maximum", "arithmetic-mean")

    @property
    def spec(self) -> str:
        """Round-trippable text form accepted by :meth:`parse`."""
        short = {v: k for k, v in ALIASES.items() if k not in ("minimum", "maximum", "prod", "avg")}
        name = short.get(self.family, self.family)
        if self.parameter is None:
            return name
        return f"{name}:{self.parameter:g}"

    def __str__(self) -> str:
        return self.spec

    def __call__(self, x, y):
        return evaluate(self, x, y)

    def dual(self) -> Operator:
        """De Morgan dual ``S(x, y) = 1 - T(1 - x, 1 - y)``."""
        if self.kind == MEAN:
            raise OperatorError("the arithmetic mean has no t-norm/t-conorm dual")
        return Operator(_DUALS[self.family], self.parameter)

    def fold(self, values: Sequence[float] | np.ndarray) -> float | np.ndarray:
        return fold(self, values)


def _check_unit(*arrays):
    for a in arrays:
        a = np.asarray(a, dtype=float)
        if np.any(~np.isfinite(a)) or np.any(a < 0.0) or np.any(a > 1.0):
            raise OperatorError("operator arguments must lie in [0, 1]")


def _log_expm1(a):
    """``log(exp(a) - 1)`` for ``a >= 0`` without overflow."""
    with np.errstate(divide="ignore"):
        return a + np.log(-np.expm1(-a))


def _frank_tnorm(lam: float, x, y):
    # log_λ(1 + (λ^x - 1)(λ^y - 1)/(λ - 1)), evaluated in log space so that
    # neither λ -> 0 nor λ -> ∞ cancels or overflows
    ln = np.log(lam)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if ln > 0.0:
        z = _log_expm1(x * ln) + _log_expm1(y * ln) - _log_expm1(ln)
        return np.logaddexp(0.0, z) / ln
    # λ < 1: the inner ratio is (λ^x (1 - λ^y) + λ^y (1 - λ^(1-y))) / (1 - λ);
    # sorting the arguments keeps the result bitwise symmetric
    x, y = np.minimum(x, y), np.maximum(x, y)
    with np.errstate(divide="ignore"):
        first = x * ln + np.log(-np.expm1(y * ln))
        second = y * ln + np.log(-np.expm1((1.0 - y) * ln))
        return (np.logaddexp(first, second) - np.log(-np.expm1(ln))) / ln


def _hamacher_tnorm(gamma: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    denom = gamma + (1.0 - gamma) * (x + y - x * y)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(denom > 0.0, x * y / np.where(denom > 0.0, denom, 1.0), 0.0)
    return out


def _raw(op: Operator, x, y):
    f = op.family
    if f == "minimum":
        return np.minimum(x, y)
    if f == "maximum":
        return np.maximum(x, y)
    if f == "product":
        return x * y
    if f == "probabilistic-sum":
        return x + y - x * y
    if f == "lukasiewicz":
        return np.maximum(0.0, x + y - 1.0)
    if f == "bounded-sum":
        return np.minimum(1.0, x + y)
    if f == "frank":
        return _frank_tnorm(op.parameter, x, y)
    if f == "frank-conorm":
        return 1.0 - _frank_tnorm(op.parameter, 1.0 - x, 1.0 - y)
    if f == "hamacher":
        return _hamacher_tnorm(op.parameter, x, y)
    if f == "hamacher-conorm":
        return 1.0 - _hamacher_tnorm(op.parameter, 1.0 - x, 1.0 - y)
    if f == "arithmetic-mean":
        return 0.5 * (x + y)
    raise OperatorError(f"unknown operator family {f!r}")  # pragma: no cover


def evaluate(op: Operator, x, y):
    """Apply ``op`` to scalars or broadcastable arrays in ``[0, 1]``."""
    _check_unit(x, y)
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    out = _apply(op, np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(out) if scalar else out


def _apply(op: Operator, x, y):
    out = np.clip(_raw(op, x, y), 0.0, 1.0)
    if op.family not in ("minimum", "maximum", "product", "arithmetic-mean"):
        # pin the boundary identities the closed forms only reach up to rounding
        x, y, out = np.broadcast_arrays(x, y, out)
        neutral, absorbing = (1.0, 0.0) if op.is_tnorm else (0.0, 1.0)
        out = np.where(y == neutral, x, out)
        out = np.where(x == neutral, y, out)
        out = np.where((x == absorbing) | (y == absorbing), absorbing, out)
    return out


def fold(op: Operator, values) -> float | np.ndarray:
    """Aggregate along the first axis of ``values``.

    Associative families are left-folded; the mean is the exact k-ary
    average rather than an iterated pairwise mean.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0 or arr.shape[0] == 0:
        raise OperatorError("fold needs at least one value")
    _check_unit(arr)
    if op.kind == MEAN:
        out = arr.mean(axis=0)
    else:
        out = reduce(lambda acc, v: _apply(op, acc, v), arr[1:], arr[0])
    return float(out) if np.ndim(out) == 0 else np.asarray(out)


def pointwise_dominates(a: Operator, b: Operator, steps: int = 101, tol: float = 1e-12) -> bool:
    """True iff ``a(x, y) <= b(x, y)`` on a ``steps x steps`` grid of the unit square."""
    if a.kind != b.kind:
        raise OperatorError(f"cannot compare a {a.kind} with a {b.kind}")
    grid = np.linspace(0.0, 1.0, steps)
    x, y = np.meshgrid(grid, grid)
    return bool(np.all(evaluate(a, x, y) <= evaluate(b, x, y) + tol))


MIN = Operator("minimum")
MAX = Operator("maximum")
PRODUCT = Operator("product")
PROBSUM = Operator("probabilistic-sum")
LUKASIEWICZ = Operator("lukasiewicz")
BOUNDED_SUM = Operator("bounded-sum")
MEAN_OP = Operator("arithmetic-mean")
