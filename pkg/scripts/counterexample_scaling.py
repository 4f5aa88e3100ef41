#!/usr/bin/env python3
"""Trace the envelope/E^1 ratio for narrowing edge spectra and fit its growth.

The verification sweep stops at eps = 1/8; this script pushes further down
(costs grow quickly: the spectral width sets the oscillation period the
quadrature must resolve) and fits

    ratio(eps) = c1 * (d + eps^(-(1/p - 1)))

to show the narrowing exponent at work and how the additive transient d
keeps small-range ratio quotients below the asymptotic slope.
"""

import argparse

import numpy as np

from pwenv import QuadratureSpec, counterexample_ratio


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.75)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--min-eps", type=float, default=1.0 / 32.0)
    args = ap.parse_args()

    quad = QuadratureSpec.fast()
    eps = 1.0
    rows = []
    while eps >= args.min_eps * (1.0 - 1e-12):
        r = counterexample_ratio(eps, args.p, quad, k=args.k)
        rows.append((eps, r))
        print(f"eps = 1/{round(1 / eps):<4d} ratio = {r:.6f}")
        eps *= 0.5

    # least squares in (c1, c1*d) against the model above
    expo = 1.0 / args.p - 1.0
    A = np.stack([np.array([e ** -expo for e, _ in rows]), np.ones(len(rows))], axis=1)
    y = np.array([r for _, r in rows])
    (c1, c1d), *_ = np.linalg.lstsq(A, y, rcond=None)
    print(f"\nfit: ratio(eps) ~= {c1:.4f} * (eps^-{expo:.4f} + {c1d / c1:.4f})")
    quotient = rows[-1][1] / rows[0][1]
    print(f"measured ratio({rows[-1][0]:.4g}) / ratio(1) = {quotient:.4f}")
    print(f"asymptotic slope alone would give {(rows[-1][0]) ** -expo:.4f}")


if __name__ == "__main__":
    main()
