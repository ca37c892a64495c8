"""Finite-SNR rate curves and slopes for the constructed schemes, written as CSV."""

import argparse
import csv
import math
from fractions import Fraction as F
from pathlib import Path

from misodof.core import CsitPattern
from misodof.schemes import (
    SchemeConfig,
    alternating_order2_scheme,
    corner_scheme_case_a,
    fig5_scheme,
    hybrid_corner_scheme,
    rate_curve,
    rate_slope,
    zf_pattern_scheme,
)

SCHEMES = {
    "zf-k2": lambda: zf_pattern_scheme(CsitPattern.from_columns(["PP"])),
    "fig5": fig5_scheme,
    "case-a": lambda: corner_scheme_case_a(3, F(1, 3), 0),
    "hybrid": lambda: hybrid_corner_scheme(F(1, 3), F(1, 3), 3, [0, 1]),
    "alternating": alternating_order2_scheme,
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("rate_curves"))
    parser.add_argument("--db", default="20,30,40,50,60")
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("schemes", nargs="*", default=list(SCHEMES))
    args = parser.parse_args()

    snr = tuple(10 ** (float(x) / 10) for x in args.db.split(","))
    args.out.mkdir(parents=True, exist_ok=True)
    for name in args.schemes:
        schedule, result = SCHEMES[name]()
        config = SchemeConfig(schedule.users, schedule.users, snr, args.trials, args.seed)
        rates = rate_curve(schedule, config)
        with open(args.out / f"{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["snr_db"] + [f"rate{u + 1}" for u in range(schedule.users)])
            for p, row in zip(snr, rates):
                w.writerow([round(10 * math.log10(p), 6)] + [float(r) for r in row])
        slopes = rate_slope(schedule, config)
        dof = ", ".join(str(d) for d in result.dof)
        print(f"{name:12s} dof ({dof})  slopes ({', '.join(f'{s:.3f}' for s in slopes)})")


if __name__ == "__main__":
    main()
