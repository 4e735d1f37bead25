"""Regenerate heights.json from the independent oracle in tests/oracles.py.

    python tests/fixtures/make_height_fixtures.py

Each value is the N = 11 doubling approximant; ``drift`` is its distance from
the N = 10 approximant.
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from oracles import frac_add, reference_height  # noqa: E402

CURVES = {
    "square_26_15": (-676, 225, [(0, 15), (26, 15), (-1, 30)]),
    "sixth_1_2": (-1, 64, [(0, 8), (1, 8), (-4, 2)]),
}
N = 11


def main():
    out = {}
    for name, (A, B, pts) in CURVES.items():
        pts = [(Fraction(x), Fraction(y)) for x, y in pts]
        labelled = {f"P{i + 1}": P for i, P in enumerate(pts)}
        for i in range(3):
            for j in range(i + 1, 3):
                labelled[f"P{i + 1}+P{j + 1}"] = frac_add(A, pts[i], pts[j])
        entries = {}
        for label, (x, y) in labelled.items():
            h11 = reference_height(A, B, x, y, N)
            h10 = reference_height(A, B, x, y, N - 1)
            entries[label] = {
                "x": f"{x.numerator}/{x.denominator}",
                "y": f"{y.numerator}/{y.denominator}",
                "height": float(h11),
                "drift": float(abs(h11 - h10)),
            }
            print(name, label, float(h11), float(abs(h11 - h10)), flush=True)
        out[name] = {"A": A, "B": B, "N": N, "points": entries}
    (HERE / "heights.json").write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
