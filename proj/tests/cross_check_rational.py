#!/usr/bin/env python3
"""Exact-rational cross-check of the divergence table.

Recomputes the deviation ratios Q(n, r) of the `counterexample verify`
subcommand in exact fractions (the tent masses of the capped model are
rational, and so are Q^r and bound^r), then checks

  * the CLI's floating-point Q values against the exact ones, and
  * the inequality Q^r > bound^r exactly, with no tolerance at all.

Usage: cross_check_rational.py /path/to/gaugecalc
"""

import csv
import io
import subprocess
import sys
from fractions import Fraction as Fr

CAP = 60
N_MAX = 12


def gap_len(n):
    return Fr(1, 2**n * (n + 2) * (n + 3))


def level_len(n):
    return Fr(n + 4, 2 ** (n + 1) * (n + 2))


def val_mag(n):
    return Fr(1, max(n, 1))


def tent_mass(j, r):
    """Integral of |f|^r over one level-j gap: plateau plus two ramps."""
    v = gap_len(j) / 2
    w = gap_len(j) / 4
    return val_mag(j) ** r * (v + 2 * w * Fr(1, r + 1))


def interval_mass(m, r):
    """Integral of |f|^r over one level-m interval of the depth-capped model."""
    return sum(2 ** (j - m) * tent_mass(j, r) for j in range(m, CAP))


def q_power_r(n, r):
    """Q(n, r)^r for the window [0, r_n/2]: left ramp + half plateau + child."""
    w = gap_len(n) / 4
    integral = (
        interval_mass(n + 1, r)
        + w * val_mag(n) ** r * Fr(1, r + 1)
        + (gap_len(n) / 4) * val_mag(n) ** r
    )
    h = level_len(n) / 2
    return (integral / h) / h**r


def bound_power_r(n, r):
    return (Fr(2 ** (n + 2) * (n + 2), n)) ** r / (Fr(n + 4) ** (r + 1) * Fr(n + 3))


def main():
    if len(sys.argv) != 2:
        print("usage: cross_check_rational.py <gaugecalc binary>")
        return 2
    out = subprocess.run(
        [sys.argv[1], "counterexample", "verify", "--n-min", "1", "--n-max", str(N_MAX),
         "--r", "1,2", "--format", "csv"],
        capture_output=True, text=True)
    if out.returncode != 0:
        print("verify subcommand failed:", out.stderr)
        return 1

    rows = list(csv.DictReader(io.StringIO(out.stdout)))
    if len(rows) != 2 * N_MAX:
        print(f"expected {2 * N_MAX} rows, got {len(rows)}")
        return 1

    worst_rel = 0.0
    for row in rows:
        n = int(row["n"])
        r = int(float(row["r"]))
        q_cli = float(row["q"])
        qr = q_power_r(n, r)
        q_exact = float(qr) ** (1.0 / r)
        rel = abs(q_cli - q_exact) / q_exact
        worst_rel = max(worst_rel, rel)
        if rel > 1e-12:
            print(f"q mismatch at n={n} r={r}: cli={q_cli!r} exact={q_exact!r}")
            return 1
        if not qr > bound_power_r(n, r):
            print(f"exact inequality fails at n={n} r={r}")
            return 1
        if row["pass"] != "true":
            print(f"row n={n} r={r} not marked as passing")
            return 1
    print(f"{len(rows)} rows match exact rationals "
          f"(worst relative difference {worst_rel:.3e}); "
          f"Q^r > bound^r holds exactly for every row")
    return 0


if __name__ == "__main__":
    sys.exit(main())
