"""Walk through the worked examples with the library API.

Run from the repository root:  python scripts/demo_worked_examples.py
"""

from pathlib import Path

import numpy as np

from possfuse.document import read_document
from possfuse.isopignistic import decompose, reconstruct, relativize, zeta
from possfuse.mass import betp, ignorance, pignistic_entropy
from possfuse.rules import FusionConfig, caucr, ccr, dcr, pecr

BPA = Path(__file__).resolve().parent / "bpa"
np.set_printoptions(precision=4, suppress=True)


def load(name):
    return read_document(BPA / f"{name}.json")


def section(title):
    print(f"\n== {title}")


def main():
    m1, m2 = load("iso_m1"), load("iso_m2")
    section("trans-isopignistic flows between two isopignistic BPAs")
    print("zeta:", zeta(m1, m2).values)
    section("isopignistic function and relative function")
    print("I   :", decompose(m1).values)
    rel = relativize(m1)
    print("rel :", rel.values, "scales", np.round(rel.scales, 4))
    print("reconstructed:", reconstruct(rel).masses)

    a, b = load("src1"), load("src2")
    section("possibilistic combination, product propensity and max commitment")
    m, diag = pecr([a, b], FusionConfig("product", "max"))
    print("raw propensity:", diag.raw_propensity, "conflict", round(diag.conflict, 4))
    print("fused relative:", diag.relative.values)
    print("fused BPA     :", m.masses)

    section("rule comparison on the same inputs")
    rows = [
        ("pecr product/max", m),
        ("pecr product/product", pecr([a, b], FusionConfig("product", "product"))[0]),
        ("pecr min/min", pecr([a, b], FusionConfig("min", "min"))[0]),
        ("pecr probsum/probsum", pecr([a, b], FusionConfig("probsum", "probsum"))[0]),
        ("ccr", ccr(a, b)),
        ("dcr", dcr(a, b)),
        ("caucr", caucr(a, b)),
    ]
    print(f"{'rule':<22}{'m(∅)':>8}{'Ign':>8}{'H':>8}  BetP")
    for name, r in rows:
        print(f"{name:<22}{r.empty_mass:8.4f}{ignorance(r):8.4f}{pignistic_entropy(r):8.4f}  {betp(r).p}")

    section("Bayesian sources stay Bayesian")
    p1, p2 = load("bayes1"), load("bayes2")
    for op in ("min", "max", "product"):
        print(f"{op:<8}", pecr([p1, p2], FusionConfig(op, op))[0].masses)

    section("probability and possibility fused with product propensity")
    prob, poss = load("prob"), load("poss")
    for c in ("min", "mean", "max"):
        r = pecr([prob, poss], FusionConfig("product", c))[0]
        print(f"C={c:<5}", r.masses, "Ign", round(ignorance(r), 3))


if __name__ == "__main__":
    main()
