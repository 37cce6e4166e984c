"""Boundary residual of the scattering solve against node count and wavenumber."""

import argparse
import math

from screenlab.arcgeom import CircularArc, UNIT_SLIT
from screenlab.helmholtz import IncidentWave, boundary_residual, solve_density


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=float, nargs="+", default=[1.0, 10.0, 20.0, 40.0])
    ap.add_argument("--N", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--arc", choices=["segment", "circular"], default="segment")
    args = ap.parse_args()
    arc = UNIT_SLIT if args.arc == "segment" else CircularArc((0.0, 0.0), 1.0, (0.3, 2.4))
    print("k".rjust(6) + "".join(f"N={n}".rjust(12) for n in args.N))
    for k in args.k:
        inc = IncidentWave.from_angle(math.pi / 2, k)
        row = [boundary_residual(solve_density(arc, inc, n), inc) for n in args.N]
        print(f"{k:6g}" + "".join(f"{r:12.2e}" for r in row))


if __name__ == "__main__":
    main()
