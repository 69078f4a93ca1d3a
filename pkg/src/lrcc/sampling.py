"""Random small codes for property sweeps and experiments."""

from __future__ import annotations

import random

from . import linalg
from .convcode import ConvCode, code_from_generator
from .polymat import PolyMatrix, poly_rank


def random_generator(F, n: int, k: int, mu: int, rng: random.Random) -> PolyMatrix:
    """Random k x n generator with full-rank G_0 and entries of degree <= mu."""
    while True:
        G0 = [[rng.randrange(F.order) for _ in range(n)] for _ in range(k)]
        if linalg.rank(F, G0) < k:
            continue
        rows = []
        for i in range(k):
            rows.append(tuple(tuple([G0[i][c]] + [rng.randrange(F.order) for _ in range(mu)])
                              for c in range(n)))
        G = PolyMatrix(F, tuple(rows))
        if poly_rank(G) == k:
            return G


def random_code(F, n: int, k: int, mu: int, rng: random.Random,
                non_catastrophic: bool = True, tries: int = 200) -> ConvCode:
    for _ in range(tries):
        C = code_from_generator(F, random_generator(F, n, k, mu, rng))
        if C.basic or not non_catastrophic:
            return C
    raise RuntimeError("no non-catastrophic sample found")
