"""Recover a circular arc from one far-field pattern at several noise levels."""

import argparse
import logging
import math

from screenlab.arcgeom import CircularArc
from screenlab.inverse import MeasurementKind, ReconstructionConfig, reconstruct, simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=float, default=2.0)
    ap.add_argument("--theta-degrees", type=float, default=-90.0)
    ap.add_argument("--M", type=int, default=64)
    ap.add_argument("--N-data", type=int, default=96)
    ap.add_argument("--N", type=int, default=64)
    ap.add_argument("--noise", type=float, nargs="+", default=[0.0, 0.001, 0.01, 0.05])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    truth = CircularArc((0.0, 0.0), 1.0, (math.pi / 4, 3 * math.pi / 4))
    guess = CircularArc((0.1, 0.0), 1.2, truth.angles)
    theta = math.radians(args.theta_degrees)
    cfg = ReconstructionConfig(n=args.N)
    print(f"{'noise':>8} {'seed':>5} {'iters':>6} {'residual':>10} {'hausdorff':>10}")
    for noise in args.noise:
        for seed in range(args.seeds if noise > 0 else 1):
            meas = simulate(truth, MeasurementKind.FAR_FIELD, k=args.k, theta=theta, m=args.M,
                            noise_level=noise, seed=seed, n=args.N_data)
            res = reconstruct(meas, cfg, guess, truth)
            print(f"{noise:8.3g} {seed:5d} {res.iterations:6d} {res.residuals[-1]:10.2e} "
                  f"{res.hausdorff:10.2e}")


if __name__ == "__main__":
    main()
