"""Monte-Carlo repair sweep over erasure rates on the tiny instance.

Reports, per rate, the fraction of streams fully repaired and the mean
symbols read per erased symbol for local-first and window-only policies.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
from dataclasses import dataclass, field

from lrcc.convcode import encode_stream
from lrcc.lrcc import build_construction1
from lrcc.msrd import MsrdParams, build_msrd_outer
from lrcc.repair import WindowPolicy, adaptive_repair, inject_erasures


@dataclass
class SweepConfig:
    rates: list = field(default_factory=lambda: [0.05, 0.1, 0.2, 0.3, 0.4])
    trials: int = 200
    T: int = 16
    j_max: int = 2
    seed: int = 0


def sweep(cfg: SweepConfig):
    outer, _ = build_msrd_outer(MsrdParams(2, 1, 1, 2, 8))
    X = build_construction1(outer, 1, 2, 2)
    rng = random.Random(cfg.seed)
    rows = []
    for rate in cfg.rates:
        samples = []
        for _ in range(cfg.trials):
            v = encode_stream(X.code, [[rng.randrange(256)] for _ in range(cfg.T)])
            pat = [(t, c) for t in range(cfg.T) for c in range(X.n) if rng.random() < rate]
            samples.append((v, pat))
        # both policies see the same streams
        for local_first in (True, False):
            ok = reads = erased = 0
            pol = WindowPolicy(j_max=cfg.j_max, stall="skip", local_first=local_first)
            for v, pat in samples:
                out, rep = adaptive_repair(X, inject_erasures(v, pat), pol)
                ok += out.blocks == v
                reads += rep.totals["downloaded_symbols"]
                erased += len(pat)
            rows.append([rate, "local-first" if local_first else "window-only",
                         f"{ok / cfg.trials:.4f}", f"{reads / max(erased, 1):.3f}"])
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rates", type=float, nargs="+", default=SweepConfig().rates)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--T", type=int, default=16)
    ap.add_argument("--j-max", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    cfg = SweepConfig(a.rates, a.trials, a.T, a.j_max, a.seed)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["rate", "policy", "stream_success", "reads_per_erasure"])
    w.writerows(sweep(cfg))


if __name__ == "__main__":
    main()
