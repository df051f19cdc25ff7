"""Write fused masses as the Frank parameter of one component varies.

The other component is held at Frank λ = 0.5.  Output is CSV for an external
plotter:  python scripts/frank_sensitivity.py > sweep.csv
"""

import sys
from pathlib import Path

from possfuse.cli import main

BPA = Path(__file__).resolve().parent / "bpa"

if __name__ == "__main__":
    component = sys.argv[1] if len(sys.argv) > 1 else "propensity"
    sys.exit(
        main(
            [
                "sweep",
                "--inputs",
                str(BPA / "sweep1.json"),
                str(BPA / "sweep2.json"),
                "--family",
                "frank",
                "--component",
                component,
                "--grid",
                "0.01:0.99:100",
            ]
        )
    )
