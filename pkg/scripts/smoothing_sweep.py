#!/usr/bin/env python3
"""Smoothing sweep on the rounded square.

Prints the Fourier-decay closeness measure delta(t) over a schedule and
the direction-function homotopy action over a cutoff ladder.
"""

import argparse

from curveflow import SmoothingSchedule, fourier_smoothing_homotopy, h1_smoothing_path
from curveflow.generators import rounded_square


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--decay", choices=("abs", "log2"), default="abs")
    ap.add_argument("--schedule", default="0.1,0.05,0.02,0.01")
    ap.add_argument("--cutoffs", default="8,16,32,64")
    args = ap.parse_args()

    c = rounded_square(args.n)
    times = tuple(float(t) for t in args.schedule.split(","))
    steps = fourier_smoothing_homotopy(c, SmoothingSchedule(args.decay, times))
    print(f"Fourier smoothing, f = {args.decay}:")
    print(f"{'t':>8} {'delta':>12} {'tail mass':>12} {'speed range':>18}")
    for s in steps:
        print(
            f"{s.t:>8g} {s.delta:>12.4e} {s.tail_mass:>12.3e} "
            f"[{s.speed_min:.3f}, {s.speed_max:.3f}]"
        )

    print("\ndirection-function smoothing:")
    print(f"{'cutoff':>8} {'H1 action':>14}")
    for k in (int(x) for x in args.cutoffs.split(",")):
        _, action = h1_smoothing_path(c, cutoff=k)
        print(f"{k:>8} {action:>14.6e}")


if __name__ == "__main__":
    main()
