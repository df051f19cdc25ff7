"""Command-line interface: ``possfuse {decompose,fuse,compare,experiment,sweep}``.

Exit codes: 0 on success, 2 for usage and input errors, 3 when a rule's
precondition is violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .document import DocumentError, read_document, round_sig, subset_key, to_document
from .isopignistic import decompose, relativize
from .mass import (
    InvalidMassError,
    MassFunction,
    PreconditionError,
    betp,
    belief_vector,
    commonality_vector,
    ignorance,
    pignistic_entropy,
    plausibility_vector,
)
from .multiview import DatasetError, get_protocol, load_csv, load_dataset, parse_rule, protocol_table, run_cv, standard_rules
from .operators import ALIASES, Operator, OperatorError
from .powerset import FrameError
from .rules import BINARY_RULES, FusionConfig, combine_all, pecr

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3

OPERATOR_GRAMMAR = "min|product|lukasiewicz|max|probsum|boundedsum|mean|frank:<λ>|hamacher:<γ>"
FORMATS = ("json", "csv", "table")


class UsageError(ValueError):
    pass


# -- rule specs -------------------------------------------------------------------------


def _take_operator(tokens: list[str]) -> tuple[Operator, list[str]]:
    if not tokens:
        raise OperatorError(f"missing operator; expected {OPERATOR_GRAMMAR}")
    name = tokens[0].strip().lower()
    family = ALIASES.get(name)
    if family is not None and family in ("frank", "frank-conorm", "hamacher", "hamacher-conorm"):
        if len(tokens) < 2:
            raise OperatorError(f"operator {name!r} needs a parameter, e.g. {name}:0.5")
        return Operator.parse(f"{tokens[0]}:{tokens[1]}"), tokens[2:]
    return Operator.parse(tokens[0]), tokens[1:]


def parse_fusion_rule(text: str, propensity: str = "product", commitment: str = "max") -> tuple[str, Callable]:
    """``pecr[:P[:C]]`` or a classical rule name; returns (label, fn(sources) -> (m, extra))."""
    tokens = text.strip().split(":")
    head = tokens[0].lower()
    if head == "pecr":
        rest = tokens[1:]
        p_op = Operator.parse(propensity)
        c_op = Operator.parse(commitment)
        if rest:
            p_op, rest = _take_operator(rest)
        if rest:
            c_op, rest = _take_operator(rest)
        if rest:
            raise UsageError(f"trailing text in rule {text!r}")
        cfg = FusionConfig(p_op, c_op)

        def run(sources):
            m, diag = pecr(sources, cfg)
            return m, {
                "raw_propensity": [round_sig(v) for v in diag.raw_propensity],
                "height": round_sig(diag.height),
            }

        return cfg.name, run
    if head in BINARY_RULES and len(tokens) == 1:
        rule = BINARY_RULES[head]
        return head, lambda sources: (combine_all(rule, sources), {})
    raise UsageError(f"unknown rule {text!r}; expected pecr[:P[:C]] or one of {sorted(BINARY_RULES)}")


def _split_list(text: str) -> list[str]:
    # commas separate rules; colons stay inside a rule
    return [item.strip() for item in text.split(",") if item.strip()]


# -- output -----------------------------------------------------------------------------


def _fmt(value, digits: int = 12) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{digits}g}"
    return str(value)


def _render_table(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[str(h) for h in headers]] + [[_fmt(v, 6) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _render_csv(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _subset_label(frame, bits: int) -> str:
    return "{" + ",".join(frame.subset_labels(bits)) + "}"


def _entropy_or_none(m: MassFunction):
    return None if m.empty_mass >= 1.0 else round_sig(pignistic_entropy(m))


# -- commands -----------------------------------------------------------------------------


def cmd_decompose(args) -> int:
    m = read_document(args.input)
    frame = m.frame
    iso = decompose(m).values
    rel = relativize(m)
    bel, pl, q = belief_vector(m), plausibility_vector(m), commonality_vector(m)
    normal = m.empty_mass < 1.0
    p = betp(m).p if normal else np.full(frame.n, np.nan)
    poss = iso[list(frame.singletons)]
    columns = {"m": m.masses, "bel": bel, "pl": pl, "q": q, "iso": iso, "relative": rel.values}
    if args.format == "json":
        out = {
            "frame": list(frame.labels),
            "empty_mass": round_sig(m.empty_mass),
            "betp": {lab: round_sig(v) for lab, v in zip(frame.labels, p)} if normal else None,
            "possibility": {lab: round_sig(v) for lab, v in zip(frame.labels, poss)},
            "scales": {str(t + 2): round_sig(s) for t, s in enumerate(rel.scales)},
        }
        for name, vec in columns.items():
            out[name] = {subset_key(frame, b): round_sig(vec[b]) for b in range(frame.size)}
        _emit(_dump_json(out))
        return EXIT_OK
    headers = ["subset", "size", *columns, "betp", "poss"]
    rows = []
    for b in range(frame.size):
        single = frame.cardinalities[b] == 1
        i = b.bit_length() - 1
        row = [_subset_label(frame, b), int(frame.cardinalities[b])] + [float(v[b]) for v in columns.values()]
        row += [float(p[i]) if single and normal else None, float(poss[i]) if single else None]
        rows.append(row)
    if args.format == "csv":
        _emit(_render_csv(headers, rows))
    else:
        _emit(_render_table(headers, rows))
        _emit(_render_table(["layer", "scale"], [[t + 2, s] for t, s in enumerate(rel.scales)]))
    return EXIT_OK


def _load_sources(paths: Sequence[str]) -> list[MassFunction]:
    sources = [read_document(p) for p in paths]
    for m in sources[1:]:
        sources[0].frame.require_same(m.frame)
    return sources


def cmd_fuse(args) -> int:
    sources = _load_sources(args.inputs)
    if len(sources) < 2:
        raise UsageError("fuse needs at least two input files")
    label, run = parse_fusion_rule(args.rule, args.propensity, args.commitment)
    if not label.startswith("pecr") and (args.propensity_given or args.commitment_given):
        raise UsageError("--propensity/--commitment only apply to --rule pecr")
    m, extra = run(sources)
    frame = m.frame
    diag = {
        "conflict": round_sig(m.empty_mass),
        "ign": round_sig(ignorance(m)),
        "entropy": _entropy_or_none(m),
        **extra,
    }
    if args.output:
        Path(args.output).write_text(_dump_json(to_document(m)))
    if args.format == "json":
        _emit(_dump_json({"rule": label, "fused": to_document(m, keep_zeros=True), "diagnostics": diag}))
        return EXIT_OK
    rows = [[_subset_label(frame, b), float(m.masses[b])] for b in range(frame.size)]
    if args.format == "csv":
        _emit(_render_csv(["subset", "mass"], rows))
    else:
        _emit(f"rule: {label}")
        _emit(_render_table(["subset", "mass"], rows))
        _emit(_render_table(["diagnostic", "value"], [[k, v] for k, v in diag.items() if not isinstance(v, list)]))
    return EXIT_OK


def cmd_compare(args) -> int:
    rules = _split_list(args.rules)
    if not rules:
        raise UsageError("--rules needs at least one rule")
    sources = _load_sources(args.inputs)
    if len(sources) < 2:
        raise UsageError("compare needs at least two input files")
    parsed = [parse_fusion_rule(r) for r in rules]
    rows = []
    for label, run in parsed:
        try:
            m, _ = run(sources)
        except (PreconditionError, InvalidMassError) as exc:
            rows.append([label, None, None, None, str(exc)])
            continue
        rows.append([label, round_sig(m.empty_mass), round_sig(ignorance(m)), _entropy_or_none(m), ""])
    headers = ["rule", "empty_mass", "ign", "entropy", "error"]
    if args.format == "json":
        _emit(_dump_json([dict(zip(headers, row)) for row in rows]))
    elif args.format == "csv":
        _emit(_render_csv(headers, rows))
    else:
        _emit(_render_table(headers, rows))
    return EXIT_OK


def _report_rows(reports, timing: bool):
    n_folds = max(len(r.accuracies) for r in reports)
    headers = ["rule", "mean", "std"] + [f"fold_{i + 1}" for i in range(n_folds)] + ["selected"]
    if timing:
        headers.append("wall_time")
    rows = []
    for r in reports:
        row = [r.rule, round_sig(r.mean), round_sig(r.std)] + [round_sig(a) for a in r.accuracies]
        row.append(";".join(f"{s:g}" for s in r.selected))
        if timing:
            row.append(round(r.runtime, 3))
        rows.append(row)
    return headers, rows


def cmd_experiment(args) -> int:
    protocol = get_protocol(args.protocol)
    if args.dataset is None:
        table = load_dataset(protocol.dataset)
    elif Path(args.dataset).exists():
        table = load_csv(args.dataset)
    else:
        table = load_dataset(args.dataset)
    table = protocol_table(protocol, table)
    names = _split_list(args.rules) if args.rules else list(standard_rules())
    if not names:
        raise UsageError("--rules needs at least one rule")
    rules = [parse_rule(n, args.caucr_discount) for n in names]
    if args.folds < 2 or args.repeats < 1:
        raise UsageError("need --folds >= 2 and --repeats >= 1")
    reports = run_cv(table, protocol, rules, args.folds, args.repeats, args.seed, args.inner_folds)
    headers, rows = _report_rows(reports, args.timing)
    records = [dict(zip(headers, row)) for row in rows]
    if args.output:
        path = Path(args.output)
        path.write_text(_dump_json(records) if path.suffix == ".json" else _render_csv(headers, rows))
    if args.format == "json":
        _emit(_dump_json(records))
    elif args.format == "csv":
        _emit(_render_csv(headers, rows))
    else:
        summary = [[r.rule, f"{r.mean:.4f} ± {r.std:.4f}", len(r.accuracies)] for r in reports]
        _emit(f"protocol {protocol.name}: {args.folds}-fold x {args.repeats} repeats, seed {args.seed}")
        _emit(_render_table(["rule", "accuracy", "folds"], summary))
    return EXIT_OK


def parse_grid(text: str, family: str) -> np.ndarray:
    """``a:b:steps`` as an inclusive evenly spaced grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like a:b:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must look like a:b:steps, got {text!r}") from None
    if steps < 1 or not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
        raise UsageError(f"invalid grid {text!r}: need finite a <= b and steps >= 1")
    if family == "frank" and lo <= 0.0:
        raise UsageError("Frank parameters must be > 0")
    if family == "hamacher" and lo < 0.0:
        raise UsageError("Hamacher parameters must be >= 0")
    return np.linspace(lo, hi, steps)


def cmd_sweep(args) -> int:
    sources = _load_sources(args.inputs)
    if len(sources) < 2:
        raise UsageError("sweep needs at least two input files")
    grid = parse_grid(args.grid, args.family)
    fixed = Operator.parse(args.fixed or f"{args.family}:0.5")
    frame = sources[0].frame
    rows = []
    for value in grid:
        op = Operator(args.family, float(value))
        cfg = FusionConfig(op, fixed) if args.component == "propensity" else FusionConfig(fixed, op)
        m, _ = pecr(sources, cfg)
        rows.append([round_sig(value)] + [round_sig(v) for v in m.masses])
    headers = ["parameter"] + [f"m({subset_key(frame, b)})" for b in range(frame.size)]
    if args.format == "json":
        _emit(_dump_json([dict(zip(headers, row)) for row in rows]))
    elif args.format == "table":
        _emit(_render_table(headers, rows))
    else:
        _emit(_render_csv(headers, rows))
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------


class _Given(argparse.Action):
    """Store the value and remember that the flag was passed explicitly."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, f"{self.dest}_given", True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="possfuse",
        description="Possibilistic representation and combination of belief functions.",
        epilog="Exit codes: 0 success, 2 input/usage error, 3 rule precondition violated.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p, default="table"):
        p.add_argument("--format", choices=FORMATS, default=default, help=f"output format (default {default})")

    p = sub.add_parser("decompose", help="set functions, isopignistic and relative functions of one BPA")
    p.add_argument("input", help="BPA document (JSON)")
    add_format(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("fuse", help="combine two or more BPAs")
    p.add_argument("inputs", nargs="+", help="BPA documents (JSON)")
    p.add_argument("--rule", default="pecr", help="pecr[:P[:C]] or one of " + ", ".join(sorted(BINARY_RULES)))
    p.add_argument("--propensity", default="product", action=_Given, help=f"PECR propensity operator: {OPERATOR_GRAMMAR}")
    p.add_argument("--commitment", default="max", action=_Given, help="PECR commitment operator, same grammar")
    p.add_argument("-o", "--output", help="also write the fused BPA document here")
    add_format(p, "json")
    p.set_defaults(func=cmd_fuse, propensity_given=False, commitment_given=False)

    p = sub.add_parser("compare", help="conflict and uncertainty of several rules on the same inputs")
    p.add_argument("inputs", nargs="+", help="BPA documents (JSON)")
    p.add_argument("--rules", required=True, help="comma-separated, e.g. ccr,dcr,pecr:product:max,pecr:frank:0.5:min")
    add_format(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser(
        "experiment",
        help="multi-view classification cross-validation",
        description="Report columns: rule, mean, std, fold_1..fold_k, selected (grid-chosen parameters), "
        "and wall_time with --timing.",
    )
    p.add_argument("--protocol", required=True, help="Wine-C1, D0-4-R6, D0-4-D4, D5-9-R2 or BC-R4")
    p.add_argument("--dataset", help="CSV path or bundled name (wine, digits, breast_cancer); default: the protocol's")
    p.add_argument(
        "--rules",
        help="comma-separated: " + ", ".join(standard_rules()) + ", frank:<λ>, hamacher:<γ> (fixed) or pecr:<op>",
    )
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inner-folds", type=int, default=3, help="inner CV folds for the frank/hamacher grids")
    p.add_argument("--caucr-discount", type=float, default=0.01, help="mass moved to the frame before CauCR")
    p.add_argument("--timing", action="store_true", help="add a wall_time column (makes output non-reproducible)")
    p.add_argument("-o", "--output", help="write the report (CSV, or JSON for a .json suffix)")
    add_format(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("sweep", help="fused masses as one operator parameter varies")
    p.add_argument("--inputs", nargs="+", required=True, help="BPA documents (JSON)")
    p.add_argument("--family", choices=("frank", "hamacher"), default="frank")
    p.add_argument("--component", choices=("propensity", "commitment"), default="propensity")
    p.add_argument("--grid", default="0.01:0.99:100", help="a:b:steps, inclusive (default 0.01:0.99:100)")
    p.add_argument("--fixed", help="operator for the other component (default <family>:0.5)")
    add_format(p, "csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"error: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (UsageError, DocumentError, OperatorError, FrameError, DatasetError, InvalidMassError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
