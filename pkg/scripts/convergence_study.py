"""Two numerical studies.

1. Distance between |psi_n^q|^2 and the ordinary oscillator density as q -> 1.
2. Accuracy of the direct quadruple-sum Bell evaluation against the
   separable form, as q grows and the q^(-k) coefficients start cancelling.
"""

import argparse

import numpy as np

from qdeform.bell import BellSpec, BellVariant, bell_terms
from qdeform.oscillator import make_params
from qdeform.verification import q_limit_distances


def q_limit_table(levels, qs):
    print("sup_x | |psi_n^q|^2 - |psi_n|^2 |")
    print("n   " + "".join(f"{'q=' + str(q):>14}" for q in qs))
    for n in levels:
        print(f"{n:<4}" + "".join(f"{d:14.3e}" for d in q_limit_distances(n, qs)))


def cancellation_table(qs, n, m, samples, seed):
    rng = np.random.default_rng(seed)
    print(f"\nmax |direct - separable| over {samples} points, Psi+ (n={n}, m={m})")
    print(f"{'q':>8} {'W1':>12} {'W2':>12} {'W3':>12}")
    for q in qs:
        p = make_params(q=q)
        spec = BellSpec(BellVariant.PSI_PLUS, n, m, p, p)
        unit = 2 * p.lam * p.h * p.hbar
        xa, xb = rng.uniform(-1.5, 1.5, (2, samples))
        pa, pb = rng.uniform(-(max(n, m) + 1) * unit, unit, (2, samples))
        a = bell_terms(spec, (xa, pa, xb, pb), "separable")
        b = bell_terms(spec, (xa, pa, xb, pb), "direct")
        errs = [np.max(np.abs(u - v)) for u, v in ((a.w1, b.w1), (a.w2, b.w2), (a.w3, b.w3))]
        print(f"{q:8.3f} " + " ".join(f"{e:12.3e}" for e in errs))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--levels", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    ap.add_argument("--qs", type=float, nargs="+", default=[0.9, 0.99, 0.999, 0.9999])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    q_limit_table(args.levels, args.qs)
    cancellation_table((0.001, 0.1, 0.5, 0.8, 0.9, 0.95), 2, 5, args.samples, args.seed)


if __name__ == "__main__":
    main()
