"""Smallest extension degree m at which the outer construction verifies.

Compares the empirical minimum with the guaranteed bound for a few shapes.
"""

from __future__ import annotations

import argparse

from lrcc.msrd import MsrdParams, empirical_min_m, msrd_field_bound

SHAPES = [(2, 1, 1, 2), (3, 1, 2, 2), (3, 2, 1, 2), (2, 1, 1, 3)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=8)
    args = ap.parse_args()
    print("N,k,delta,q,L,bound_m,empirical_m")
    for N, k, delta, q in SHAPES:
        P = MsrdParams(N, k, delta, q)
        bound = msrd_field_bound(q, P.M, P.L)
        m = empirical_min_m(N, k, delta, q, args.m_max)
        print(f"{N},{k},{delta},{q},{P.L},{bound},{'' if m is None else m}")


if __name__ == "__main__":
    main()
