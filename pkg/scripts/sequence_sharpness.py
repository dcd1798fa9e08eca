"""Print the minimizing-sequence quotients on hyperbolic space and their fitted limit.

    python3 scripts/sequence_sharpness.py --N 3 --alpha 2 --out seq.csv
"""

import argparse

from warped_ineq.cli import emit_plot_data
from warped_ineq.geometry import ManifoldModel
from warped_ineq.profiles import make_builtin_profile
from warped_ineq.sharpness import sequence_identity_quotient, sequence_pieces, sequence_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--n", type=float, nargs="+", default=[1e2, 1e3, 1e4, 1e5, 1e6])
    ap.add_argument("--out", help="write plot-ready CSV here")
    args = ap.parse_args()

    model = ManifoldModel(args.N, make_builtin_profile("hyperbolic"))
    print(f"{'n':>10} {'quotient':>14} {'identity':>14} {'error':>10}")
    for n in args.n:
        p = sequence_pieces(model, n, args.alpha)
        print(f"{n:10.3g} {p.quotient:14.10f} {sequence_identity_quotient(p, args.N):14.10f} {p.error / p.denominator:10.2e}")
    res = sequence_sweep(model, args.n, args.alpha)
    print(f"fit {res.fit_model}: c0 = {res.fitted_limit:.5f} (rms {res.fit_residual:.1e})")
    if args.out:
        print(emit_plot_data(res, args.out))


if __name__ == "__main__":
    main()
