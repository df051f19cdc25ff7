"""Run the five multi-view protocols with 5x5 stratified CV and print the accuracy table.

Run from the repository root:  python scripts/reproduce_accuracy_table.py [--seed N]
Takes well under a minute on a laptop.
"""

import argparse

from possfuse.multiview import PROTOCOLS, protocol_table, run_cv, standard_rules

RULES = ("frank", "hamacher", "min", "product", "ccr", "caucr", "majority")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rules = standard_rules()
    print(f"{'protocol':<10}" + "".join(f"{r:>17}" for r in RULES))
    totals = {r: [] for r in RULES}
    for name, proto in PROTOCOLS.items():
        reports = run_cv(protocol_table(proto), proto, [rules[r] for r in RULES], repeats=args.repeats, seed=args.seed)
        cells = []
        for rep in reports:
            totals[rep.rule].append(rep.mean)
            cells.append(f"{rep.mean:.4f} ± {rep.std:.4f}")
        print(f"{name:<10}" + "".join(f"{c:>17}" for c in cells))
    print(f"{'average':<10}" + "".join(f"{sum(v) / len(v):>17.4f}" for v in totals.values()))


if __name__ == "__main__":
    main()
