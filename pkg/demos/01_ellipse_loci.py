"""Visualize why a perturbed value is hard to invert.

Every output value y of the pairwise map sqrt(a*x1^2 + b*x2^2) corresponds
to a whole quarter-ellipse of input pairs (x1, x2), and the additive noise
thickens that curve into a band. This script samples the locus for three
different (a, b, alpha) settings at the same y and writes the overlapping
point clouds to CSV and SVG. An attacker who observes y = 1 cannot tell
which cloud - let alone which point - produced it.

Run:  python3 demos/01_ellipse_loci.py [output_dir]
"""

import sys

from epakit import EllipseParams, ellipse_locus, serialize

TRIPLES = [
    (0.22, 0.78, 0.03),
    (0.32, 0.68, 0.04),
    (0.10, 0.90, 0.05),
]


def main() -> None:
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "."
    series = []
    for i, (a, b, alpha) in enumerate(TRIPLES):
        params = EllipseParams(y_value=1.0, a=a, b=b, alpha=alpha,
                               n_points=400)
        pts = ellipse_locus(params, seed=i)
        series.append((f"a={a},b={b},alpha={alpha}", pts))
        print(f"a={a:<5} b={b:<5} alpha={alpha}:  {len(pts)} points, "
              f"x2 in [{pts[:, 1].min():.3f}, {pts[:, 1].max():.3f}]")

    csv_path = f"{out_dir}/ellipse_loci.csv"
    svg_path = f"{out_dir}/ellipse_loci.svg"
    serialize.write_ellipse_csv(series, csv_path, seed=0)
    serialize.write_ellipse_svg(series, svg_path)
    print(f"\nwrote {csv_path} and {svg_path}")
    print("the three clouds overlap: the same y is explained by all of them")


if __name__ == "__main__":
    main()
