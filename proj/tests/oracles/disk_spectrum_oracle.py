"""Dirichlet eigenvalues of the unit disk up to LAMBDA_MAX from mpmath Bessel zeros.

Writes data/disk_dirichlet.txt (one eigenvalue per line, multiplicity 2 for m >= 1)
and cross-checks against scipy's jn_zeros for the low orders.
"""
import math
import pathlib
import sys

import mpmath
from scipy.special import jn_zeros

LAMBDA_MAX = 3600.0
mpmath.mp.dps = 30

def zeros_below(m, xmax):
    out = []
    k = 1
    while True:
        z = mpmath.besseljzero(m, k)
        if z > xmax:
            return out
        out.append(z)
        k += 1

def main(path):
    xmax = math.sqrt(LAMBDA_MAX)
    vals = []
    m = 0
    while True:
        zs = zeros_below(m, xmax)
        if not zs:
            break
        if m <= 5:
            ref = jn_zeros(m, len(zs))
            assert max(abs(float(a) - b) for a, b in zip(zs, ref)) < 1e-10, m
        for z in zs:
            vals.extend([z * z] * (1 if m == 0 else 2))
        m += 1
    vals.sort()
    with open(path, "w") as f:
        f.write(f"# unit disk Dirichlet eigenvalues j_(m,p)^2 <= {LAMBDA_MAX:g}\n")
        for v in vals:
            f.write(mpmath.nstr(v, 17, min_fixed=-1, max_fixed=30) + "\n")
    print(len(vals), "eigenvalues ->", path)

if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else str(pathlib.Path(__file__).resolve().parents[2] / "data" / "disk_dirichlet.txt"))
