"""Tabulate MAT slot, feedback and DoF bookkeeping for K up to --max-k."""

import argparse

from misodof.schemes import account, feedback_census, mat_min_delay, mat_schedule


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-k", type=int, default=6)
    args = parser.parse_args()
    print(f"{'K':>2} {'j':>2} {'slots':>6} {'census':>10} {'formula':>10} {'sum DoF':>8} {'shared':>8}")
    for k in range(1, args.max_k + 1):
        for j in range(1, k + 1):
            s = mat_schedule(k, j)
            res = account(s)
            c, f = feedback_census(s), mat_min_delay(k, j)
            assert c == f, (k, j, c, f)
            print(f"{k:>2} {j:>2} {res.slots:>6} {str(c):>10} {str(f):>10} {str(res.sum_dof):>8} {str(res.shared_dof):>8}")


if __name__ == "__main__":
    main()
