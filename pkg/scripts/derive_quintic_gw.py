"""Regenerate the shipped quintic GW data from the mirror quintic periods.

Exact rational arithmetic: fundamental period, mirror map, Yukawa coupling
5/((1 - 5^5 z) w0^2) (q dz/dq / z)^3 = 5 + sum_d N_d d^3 q^d.

    python scripts/derive_quintic_gw.py [--d-max 10] [--out path]
"""
import argparse
import json
from fractions import Fraction
from math import factorial
from pathlib import Path

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src/wpstab/data/gw/quintic.json"


def harmonic(k):
    return sum((Fraction(1, j) for j in range(1, k + 1)), Fraction(0))


def gw_invariants(d_max):
    D = d_max + 2  # the division by z/q costs one order
    Fr = Fraction

    def mul(a, b):
        return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(D)]

    def inv(a):
        b = [Fr(0)] * D
        b[0] = 1 / a[0]
        for k in range(1, D):
            b[k] = -b[0] * sum(a[j] * b[k - j] for j in range(1, k + 1))
        return b

    def exp(a):
        e = [Fr(0)] * D
        e[0] = Fr(1)
        for k in range(1, D):
            e[k] = sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k
        return e

    def compose(a, z):
        out, p = [Fr(0)] * D, [Fr(1)] + [Fr(0)] * (D - 1)
        for k in range(D):
            out = [o + a[k] * pk for o, pk in zip(out, p)]
            p = mul(p, z)
        return out

    c = [Fr(factorial(5 * n), factorial(n) ** 5) for n in range(D)]
    w0 = c
    w1 = [5 * c[n] * (harmonic(5 * n) - harmonic(n)) for n in range(D)]
    r = mul(w1, inv(w0))          # q = z exp(r(z))
    z = [Fr(0), Fr(1)] + [Fr(0)] * (D - 2)
    for _ in range(D):            # fixed point z = q exp(-r(z))
        z = [Fr(0)] + inv(compose(exp(r), z))[:D - 1]
    dz = [k * z[k] for k in range(D)]
    t = mul(dz[1:] + [Fr(0)], inv(z[1:] + [Fr(0)]))   # (q dz/dq)/z
    one_minus = [(1 if k == 0 else 0) - 3125 * z[k] for k in range(D)]
    w0z = compose(w0, z)
    K = mul(mul([5 * x for x in inv(one_minus)], inv(mul(w0z, w0z))), mul(t, mul(t, t)))
    return [K[d] / d ** 3 for d in range(1, d_max + 1)]


def instanton_numbers(N):
    n = {}
    for d in range(1, len(N) + 1):
        n[d] = N[d - 1] - sum(n[k] / Fraction(d // k) ** 3 for k in range(1, d) if d % k == 0)
    return [n[d] for d in sorted(n)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d-max", type=int, default=10)
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    N = gw_invariants(args.d_max)
    n = instanton_numbers(N)
    assert all(x.denominator == 1 for x in n), "instanton numbers must be integers"
    data = {
        "variety": "quintic",
        "d_max": args.d_max,
        "source": ("genus-0 GW invariants N_d (multiple covers included) of the quintic threefold, "
                   "from the mirror quintic periods (Candelas-de la Ossa-Green-Parkes); "
                   "instanton numbers n_d = " + ", ".join(str(x.numerator) for x in n)),
        "N": [str(x) if x.denominator != 1 else x.numerator for x in N],
    }
    args.out.write_text(json.dumps(data, indent=2) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
