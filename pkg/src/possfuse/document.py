"""JSON documents for mass functions.

A document lists the frame labels and maps focal-set keys to masses.  A key
joins labels with ``"|"``; the empty string denotes the empty set::

    {"frame": ["a", "b", "c"], "masses": {"a": 0.2, "a|b": 0.5, "a|b|c": 0.3}}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .mass import InvalidMassError, MassFunction, check_masses
from .powerset import Frame, FrameError

SEPARATOR = "|"
DIGITS = 12


class DocumentError(ValueError):
    """Raised for malformed documents, unknown labels and invalid masses."""


def round_sig(x: float, digits: int = DIGITS) -> float:
    return float(f"{float(x):.{digits}g}")


def subset_key(frame: Frame, bits: int) -> str:
    return SEPARATOR.join(frame.subset_labels(bits))


def parse_key(frame: Frame, key: str) -> int:
    if key == "":
        return 0
    labels = key.split(SEPARATOR)
    try:
        return frame.index(labels)
    except FrameError:
        unknown = [lab for lab in labels if lab not in frame.labels]
        raise DocumentError(f"key {key!r} names labels {unknown} outside the frame {list(frame.labels)}") from None


def from_document(doc: dict) -> MassFunction:
    if not isinstance(doc, dict) or "frame" not in doc or "masses" not in doc:
        raise DocumentError('a document needs "frame" and "masses" fields')
    labels = doc["frame"]
    if not isinstance(labels, list) or not all(isinstance(lab, str) for lab in labels):
        raise DocumentError('"frame" must be a list of label strings')
    if any(SEPARATOR in lab for lab in labels):
        raise DocumentError(f'frame labels may not contain "{SEPARATOR}"')
    try:
        frame = Frame(labels)
    except FrameError as exc:
        raise DocumentError(str(exc)) from None
    masses = doc["masses"]
    if not isinstance(masses, dict):
        raise DocumentError('"masses" must map focal-set keys to numbers')
    arr = np.zeros(frame.size)
    seen: dict[int, str] = {}
    for key, value in masses.items():
        bits = parse_key(frame, key)
        if bits in seen:
            raise DocumentError(f"keys {seen[bits]!r} and {key!r} name the same subset")
        seen[bits] = key
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DocumentError(f"mass of {key!r} is not a number: {value!r}")
        arr[bits] = float(value)
    report = check_masses(arr)
    if not report:
        raise DocumentError(f"invalid mass function: {report.describe(frame)}")
    try:
        return MassFunction(frame, arr)
    except InvalidMassError as exc:  # pragma: no cover - check_masses already passed
        raise DocumentError(str(exc)) from None


def to_document(m: MassFunction, keep_zeros: bool = False) -> dict:
    """Document with masses rounded to 12 significant digits, in subset-index order."""
    masses = {}
    for bits in range(m.frame.size):
        value = float(m.masses[bits])
        if value != 0.0 or keep_zeros:
            masses[subset_key(m.frame, bits)] = round_sig(value)
    return {"frame": list(m.frame.labels), "masses": masses}


def read_document(path: str | Path) -> MassFunction:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    try:
        return from_document(doc)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def write_document(m: MassFunction, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_document(m), indent=2) + "\n")
