"""Multi-view classification with per-view Gaussian naive Bayes and evidential fusion.

Each view's class posterior becomes a Bayesian mass function; the views are
fused by a combination rule and the class with the largest normalized
pignistic probability is predicted.  Evaluation is repeated stratified
k-fold cross-validation with train-only standardization.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .mass import MassFunction, betp_unnormalized
from .operators import Operator, fold
from .powerset import Frame
from .rules import caucr, combine_all

PROB_FLOOR = 1e-12


class DatasetError(ValueError):
    """Raised for unreadable datasets and inconsistent protocols."""


# -- data ------------------------------------------------------------------------------


@dataclass(frozen=True)
class DatasetTable:
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise DatasetError(f"feature matrix {self.X.shape} does not match {self.y.shape[0]} labels")
        if not np.all(np.isfinite(self.X)):
            raise DatasetError("dataset contains missing or non-finite values")
        if np.unique(self.y).size < 2:
            raise DatasetError("dataset needs at least two classes")

    @property
    def classes(self) -> np.ndarray:
        return np.unique(self.y)

    def subset_classes(self, keep: Sequence[int]) -> DatasetTable:
        mask = np.isin(self.y, keep)
        return DatasetTable(self.X[mask], self.y[mask], self.feature_names)


def load_csv(path: str | Path) -> DatasetTable:
    """Read a CSV with a header row, numeric features and an integer label last."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        if len(header) < 2:
            raise DatasetError(f"{path}: need at least one feature column and a label column")
        rows, labels = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DatasetError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
            try:
                values = [float(v) for v in row[:-1]]
            except ValueError:
                col = next(i for i, v in enumerate(row[:-1]) if not _is_float(v))
                raise DatasetError(f"{path}:{lineno}: column {col + 1} ({header[col]!r}) is not numeric: {row[col]!r}") from None
            try:
                label = int(float(row[-1]))
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: label {row[-1]!r} is not an integer") from None
            rows.append(values)
            labels.append(label)
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    return DatasetTable(np.array(rows), np.array(labels, dtype=int), tuple(header[:-1]))


def _is_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_dataset(name: str) -> DatasetTable:
    """One of the bundled snapshots: ``wine``, ``digits`` or ``breast_cancer``."""
    ref = resources.files("possfuse") / "data" / f"{name}.csv"
    if not ref.is_file():
        raise DatasetError(f"no bundled dataset named {name!r}")
    with resources.as_file(ref) as path:
        return load_csv(path)


# -- views ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class ViewProtocol:
    name: str
    dataset: str
    scheme: str  # "contiguous", "round-robin" or "diagonal"
    borrow: int
    sizes: tuple[int, ...]
    n_features: int
    classes: tuple[int, ...] | None = None
    base_sizes: tuple[int, ...] | None = None  # contiguous blocks only
    grid: tuple[int, int] | None = None  # diagonal only

    @property
    def n_views(self) -> int:
        return len(self.sizes)


PROTOCOLS = {
    p.name: p
    for p in (
        ViewProtocol("Wine-C1", "wine", "contiguous", 1, (7, 6, 6), 13, base_sizes=(5, 4, 4)),
        ViewProtocol("D0-4-R6", "digits", "round-robin", 6, (34, 33, 33), 64, classes=(0, 1, 2, 3, 4)),
        ViewProtocol("D0-4-D4", "digits", "diagonal", 4, (29, 30, 29), 64, classes=(0, 1, 2, 3, 4), grid=(8, 8)),
        ViewProtocol("D5-9-R2", "digits", "round-robin", 2, (26, 25, 25), 64, classes=(5, 6, 7, 8, 9)),
        ViewProtocol("BC-R4", "breast_cancer", "round-robin", 4, (18, 18, 18), 30),
    )
}


def get_protocol(name: str) -> ViewProtocol:
    key = name.replace("–", "-").replace("--", "-")
    for proto in PROTOCOLS.values():
        if proto.name.lower() == key.lower():
            return proto
    raise DatasetError(f"unknown protocol {name!r}; expected one of {list(PROTOCOLS)}")


def base_partition(n_features: int, protocol: ViewProtocol) -> list[list[int]]:
    k = protocol.n_views
    if protocol.scheme == "contiguous":
        sizes = protocol.base_sizes or tuple(len(a) for a in np.array_split(np.arange(n_features), k))
        if sum(sizes) != n_features:
            raise DatasetError(f"contiguous blocks {sizes} do not cover {n_features} features")
        bounds = np.cumsum((0,) + tuple(sizes))
        return [list(range(bounds[i], bounds[i + 1])) for i in range(k)]
    if protocol.scheme == "round-robin":
        return [list(range(v, n_features, k)) for v in range(k)]
    if protocol.scheme == "diagonal":
        rows, cols = protocol.grid or (int(round(np.sqrt(n_features))),) * 2
        if rows * cols != n_features:
            raise DatasetError(f"a {rows}x{cols} grid does not match {n_features} features")
        views: list[list[int]] = [[] for _ in range(k)]
        for r in range(rows):
            for c in range(cols):
                views[(r + c) % k].append(r * cols + c)
        return views
    raise DatasetError(f"unknown partition scheme {protocol.scheme!r}")


def build_views(n_features: int, protocol: ViewProtocol) -> list[list[int]]:
    """Feature indices of every view: a base partition plus borrowed features.

    Each view is extended with the first ``borrow`` indices of every other
    view's base block.  The resulting sizes must equal ``protocol.sizes``.
    """
    if n_features != protocol.n_features:
        raise DatasetError(f"protocol {protocol.name} expects {protocol.n_features} features, dataset has {n_features}")
    base = base_partition(n_features, protocol)
    views = []
    for i, own in enumerate(base):
        extra = [f for j, other in enumerate(base) if j != i for f in other[: protocol.borrow]]
        views.append(own + extra)
    sizes = tuple(len(v) for v in views)
    if sizes != protocol.sizes:
        raise DatasetError(f"protocol {protocol.name}: computed view sizes {sizes}, declared {protocol.sizes}")
    return views


def protocol_table(protocol: ViewProtocol, table: DatasetTable | None = None) -> DatasetTable:
    """Dataset rows used by ``protocol`` (class-filtered where required)."""
    table = table if table is not None else load_dataset(protocol.dataset)
    if table.X.shape[1] != protocol.n_features:
        raise DatasetError(
            f"protocol {protocol.name} expects {protocol.n_features} features, dataset has {table.X.shape[1]}"
        )
    if protocol.classes is not None:
        table = table.subset_classes(protocol.classes)
        if table.y.size == 0:
            raise DatasetError(f"dataset has none of the classes {protocol.classes} used by {protocol.name}")
    return table


# -- Gaussian naive Bayes ---------------------------------------------------------------------


@dataclass(frozen=True)
class GnbModel:
    classes: np.ndarray
    means: np.ndarray  # (classes, features)
    variances: np.ndarray
    priors: np.ndarray
    epsilon: float


def gnb_fit(X: np.ndarray, y: np.ndarray, var_smoothing: float = 1e-9) -> GnbModel:
    """Per-class feature means and variances.

    Every variance is increased by ``var_smoothing`` times the largest
    feature variance (floored at ``var_smoothing``) so constant features stay
    finite.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    classes = np.unique(y)
    if classes.size == 0:
        raise DatasetError("cannot fit on an empty training set")
    epsilon = var_smoothing * max(float(np.var(X, axis=0).max()), 1.0)
    means = np.array([X[y == c].mean(axis=0) for c in classes])
    variances = np.array([X[y == c].var(axis=0) for c in classes]) + epsilon
    priors = np.array([np.mean(y == c) for c in classes])
    return GnbModel(classes, means, variances, priors, epsilon)


def gnb_log_joint(model: GnbModel, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    diff = X[:, None, :] - model.means[None, :, :]
    ll = -0.5 * (np.log(2.0 * np.pi * model.variances)[None] + diff**2 / model.variances[None]).sum(axis=2)
    return ll + np.log(model.priors)[None, :]


def gnb_predict_proba(model: GnbModel, X: np.ndarray) -> np.ndarray:
    """Class posteriors; a 1-D sample gives a 1-D result."""
    single = np.ndim(X) == 1
    lj = gnb_log_joint(model, X)
    lj -= lj.max(axis=1, keepdims=True)
    post = np.exp(lj)
    post /= post.sum(axis=1, keepdims=True)
    return post[0] if single else post


def guard_probabilities(probs: np.ndarray) -> np.ndarray:
    """Clip to ``[1e-12, 1]`` and renormalize along the last axis."""
    probs = np.clip(probs, PROB_FLOOR, 1.0)
    return probs / probs.sum(axis=-1, keepdims=True)


def proba_to_bpa(probs: Sequence[float], frame: Frame | None = None) -> MassFunction:
    """Bayesian mass function with ``m({ω_j}) = probs[j]``."""
    probs = np.asarray(probs, dtype=float)
    frame = frame or Frame.of_size(probs.size)
    return MassFunction.bayesian(frame, probs)


# -- vectorized fusion of Bayesian sources ----------------------------------------------------


def possibility_batch(probs: np.ndarray) -> np.ndarray:
    """``Poss(ω_i) = Σ_j min(p_i, p_j)`` along the last axis."""
    out = np.minimum(probs[..., :, None], probs[..., None, :]).sum(axis=-1)
    out[probs == probs.max(axis=-1, keepdims=True)] = 1.0
    return np.clip(out, 0.0, 1.0)


def probability_batch(pi: np.ndarray) -> np.ndarray:
    """Row-wise inverse of :func:`possibility_batch` for normal profiles."""
    n = pi.shape[-1]
    order = np.argsort(-pi, axis=-1, kind="stable")
    srt = np.take_along_axis(pi, order, axis=-1)
    p_sorted = np.empty_like(srt)
    p_sorted[..., n - 1] = srt[..., n - 1] / n
    for r in range(n - 2, -1, -1):
        p_sorted[..., r] = p_sorted[..., r + 1] + (srt[..., r] - srt[..., r + 1]) / (r + 1)
    p = np.empty_like(p_sorted)
    np.put_along_axis(p, order, p_sorted, axis=-1)
    return p


def pecr_bayesian_batch(probs: np.ndarray, propensity: Operator) -> np.ndarray:
    """Fused singleton masses for many Bayesian sources at once.

    ``probs`` has shape ``(views, samples, classes)``.  Returns
    ``(samples, classes + 1)`` with the fused empty mass in column 0.  Bayesian
    sources carry no commitment, so the commitment operator plays no role as
    long as it maps zeros to zero.
    """
    poss = possibility_batch(probs)
    raw = np.asarray(fold(propensity, poss))
    height = raw.max(axis=-1, keepdims=True)
    out = np.zeros(raw.shape[:-1] + (raw.shape[-1] + 1,))
    ok = height[..., 0] > 0.0
    out[~ok, 0] = 1.0
    pi = np.minimum(raw[ok] / height[ok], 1.0)
    out[ok, 1:] = height[ok] * probability_batch(pi)
    out[ok, 0] = 1.0 - height[ok, 0]
    return out


# -- decision rules ------------------------------------------------------------------------------

DecisionRule = Callable[[np.ndarray], np.ndarray]


def _argmax_with_fallback(scores: np.ndarray, probs: np.ndarray) -> np.ndarray:
    # rows with no usable score (empty fused BPA) fall back to the mean posterior
    pred = np.argmax(scores, axis=1)
    dead = ~np.any(scores > 0.0, axis=1)
    if np.any(dead):
        pred[dead] = np.argmax(probs[:, dead].mean(axis=0), axis=1)
    return pred


def pecr_decision(propensity: Operator) -> DecisionRule:
    def decide(probs: np.ndarray) -> np.ndarray:
        fused = pecr_bayesian_batch(probs, propensity)
        return _argmax_with_fallback(fused[:, 1:], probs)

    return decide


def dempster_decision(probs: np.ndarray) -> np.ndarray:
    """Normalized conjunctive combination of Bayesian sources (product of posteriors)."""
    return np.argmax(np.log(probs).sum(axis=0), axis=1)


def majority_decision(probs: np.ndarray) -> np.ndarray:
    """Per-view argmax votes; ties broken by summed probability."""
    n_classes = probs.shape[-1]
    votes = (probs.argmax(axis=-1)[..., None] == np.arange(n_classes)).sum(axis=0)
    top = votes == votes.max(axis=1, keepdims=True)
    summed = np.where(top, probs.sum(axis=0), -np.inf)
    return np.argmax(summed, axis=1)


def caucr_decision(discount: float = 0.01) -> DecisionRule:
    """Cautious rule on discounted Bayesian sources.

    Bayesian mass functions are dogmatic, so each source first moves
    ``discount`` of its mass to the whole frame.
    """

    def decide(probs: np.ndarray) -> np.ndarray:
        n_views, n_samples, n_classes = probs.shape
        frame = Frame.of_size(n_classes)
        preds = np.empty(n_samples, dtype=int)
        for s in range(n_samples):
            sources = []
            for v in range(n_views):
                arr = np.zeros(frame.size)
                arr[list(frame.singletons)] = (1.0 - discount) * probs[v, s]
                arr[frame.full] += discount
                sources.append(MassFunction(frame, arr))
            fused = combine_all(caucr, sources)
            bet = betp_unnormalized(fused)
            preds[s] = int(np.argmax(bet))
        return preds

    return decide


# -- cross-validation ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RuleSpec:
    """A named decision rule, optionally with a parameter grid selected by inner CV."""

    name: str
    make: Callable[..., DecisionRule]
    grid: tuple[float, ...] = ()

    def build(self, param: float | None = None) -> DecisionRule:
        return self.make(param) if self.grid else self.make()


FRANK_GRID = (0.01, 0.1, 0.5, 2.0, 10.0)
HAMACHER_GRID = (0.1, 0.5, 1.0, 2.0, 5.0)


def standard_rules(caucr_discount: float = 0.01, frank_grid=FRANK_GRID, hamacher_grid=HAMACHER_GRID) -> dict[str, RuleSpec]:
    """The seven decision rules compared in the multi-view experiment."""
    return {
        "frank": RuleSpec("frank", lambda lam: pecr_decision(Operator("frank", lam)), tuple(frank_grid)),
        "hamacher": RuleSpec("hamacher", lambda g: pecr_decision(Operator("hamacher", g)), tuple(hamacher_grid)),
        "min": RuleSpec("min", lambda: pecr_decision(Operator("minimum"))),
        "product": RuleSpec("product", lambda: pecr_decision(Operator("product"))),
        "ccr": RuleSpec("ccr", lambda: dempster_decision),
        "caucr": RuleSpec("caucr", lambda: caucr_decision(caucr_discount)),
        "majority": RuleSpec("majority", lambda: majority_decision),
    }


def parse_rule(text: str, caucr_discount: float = 0.01) -> RuleSpec:
    """``name`` from :func:`standard_rules`, or ``pecr:<propensity op>`` / ``frank:<λ>`` fixed."""
    rules = standard_rules(caucr_discount)
    key = text.strip().lower()
    if key in rules:
        return rules[key]
    head, _, rest = key.partition(":")
    if head == "pecr" and rest:
        op = Operator.parse(rest.split(":")[0])
        return RuleSpec(key, lambda: pecr_decision(op))
    if head in ("frank", "hamacher") and rest:
        op = Operator.parse(key)
        return RuleSpec(key, lambda: pecr_decision(op))
    raise DatasetError(f"unknown rule {text!r}; expected one of {list(rules)} or pecr:<op>")


@dataclass
class CvReport:
    rule: str
    accuracies: list[float] = field(default_factory=list)
    runtime: float = 0.0
    selected: list[float] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.accuracies))

    @property
    def std(self) -> float:
        return float(np.std(self.accuracies))

    def as_row(self) -> dict:
        return {
            "rule": self.rule,
            "mean": self.mean,
            "std": self.std,
            "folds": len(self.accuracies),
            "accuracies": list(self.accuracies),
            "selected": list(self.selected),
            "wall_time": self.runtime,
        }


def stratified_folds(y: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Fold id per sample; each class is shuffled and dealt round-robin."""
    y = np.asarray(y)
    folds = np.empty(y.size, dtype=int)
    offset = 0
    for c in np.unique(y):
        idx = np.flatnonzero(y == c)
        if idx.size < k:
            raise DatasetError(f"class {c} has {idx.size} samples, fewer than {k} folds")
        idx = rng.permutation(idx)
        # rotate the dealing start so fold sizes stay balanced across classes
        folds[idx] = (np.arange(idx.size) + offset) % k
        offset = (offset + idx.size) % k
    return folds


def standardize(train: np.ndarray, test: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale both splits with the training mean and standard deviation."""
    mu = train.mean(axis=0)
    sd = train.std(axis=0)
    sd[sd == 0.0] = 1.0
    return (train - mu) / sd, (test - mu) / sd


def view_probabilities(X_train, y_train, X_test, views, var_smoothing=1e-9) -> np.ndarray:
    """Guarded per-view posteriors, shape ``(views, test samples, classes)``."""
    tr, te = standardize(X_train, X_test)
    out = []
    for cols in views:
        model = gnb_fit(tr[:, cols], y_train, var_smoothing)
        out.append(gnb_predict_proba(model, te[:, cols]))
    return guard_probabilities(np.array(out))


def _select(rule: RuleSpec, X, y, views, inner_folds: int, rng) -> float:
    folds = stratified_folds(y, inner_folds, rng)
    correct = np.zeros(len(rule.grid))
    classes = np.unique(y)
    for f in range(inner_folds):
        tr, te = folds != f, folds == f
        probs = view_probabilities(X[tr], y[tr], X[te], views)
        truth = np.searchsorted(classes, y[te])
        for i, param in enumerate(rule.grid):
            correct[i] += np.sum(rule.build(param)(probs) == truth)
    return rule.grid[int(np.argmax(correct))]


def run_cv(
    table: DatasetTable,
    protocol: ViewProtocol,
    rules: Sequence[RuleSpec],
    folds: int = 5,
    repeats: int = 5,
    seed: int = 0,
    inner_folds: int = 3,
) -> list[CvReport]:
    """Repeated stratified cross-validation of every rule on identical splits."""
    views = build_views(table.X.shape[1], protocol)
    X, y = table.X, table.y
    classes = np.unique(y)
    rng = np.random.default_rng(seed)
    reports = {r.name: CvReport(r.name) for r in rules}
    for rep in range(repeats):
        assignment = stratified_folds(y, folds, rng)
        for f in range(folds):
            tr, te = assignment != f, assignment == f
            if np.unique(y[tr]).size != classes.size:
                raise DatasetError("a training split lacks a class")
            probs = view_probabilities(X[tr], y[tr], X[te], views)
            truth = np.searchsorted(classes, y[te])
            for rule in rules:
                start = time.perf_counter()
                param = None
                if rule.grid:
                    # inner splits depend only on (seed, repeat, fold), never on the rule list
                    inner_rng = np.random.default_rng([seed, rep, f])
                    param = _select(rule, X[tr], y[tr], views, inner_folds, inner_rng)
                    reports[rule.name].selected.append(param)
                pred = rule.build(param)(probs)
                reports[rule.name].accuracies.append(float(np.mean(pred == truth)))
                reports[rule.name].runtime += time.perf_counter() - start
    return [reports[r.name] for r in rules]
