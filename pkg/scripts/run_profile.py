"""Distance profile of an outer-times-local-MDS code next to its bounds.

Example: python scripts/run_profile.py --g 2 --r 1 --pd 2 --k 1 --delta 1 --q 2 --m 8
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from lrcc.convcode import distance_profile
from lrcc.lrcc import attainment_check, build_construction1, delta_choices, restrict_code
from lrcc.msrd import MsrdParams, build_msrd_outer


@dataclass
class ProfileConfig:
    g: int = 2
    r: int = 1
    pd: int = 2
    k: int = 1
    delta: int = 1
    q: int = 2
    m: int = 8
    j_max: int = 2


def run(cfg: ProfileConfig) -> str:
    P = MsrdParams(cfg.g * cfg.r, cfg.k, cfg.delta, cfg.q, cfg.m)
    outer, man = build_msrd_outer(P, override_m=True)
    X = build_construction1(outer, cfg.r, cfg.pd, cfg.g)
    lines = [f"# alpha={man['alpha']} n={X.n} k={X.k} N={X.N} mu={X.code.memory} delta={X.code.degree}"]
    prof = distance_profile(X.code, cfg.j_max)
    lines.append(prof.to_csv({"r": cfg.r, "pd": cfg.pd}).rstrip())
    for j in range(cfg.j_max + 1):
        lines.append(f"# attainment j={j}: {attainment_check(X, j)}")
    for delta in delta_choices(X.structure):
        R = restrict_code(X, delta)
        vals = distance_profile(R, cfg.j_max).values
        d = [vals[j] for j in sorted(vals)]
        lines.append(f"# restriction {delta}: d_j = {d}")
    return "\n".join(lines) + "\n"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in vars(ProfileConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=val)
    args = ap.parse_args()
    print(run(ProfileConfig(**vars(args))), end="")


if __name__ == "__main__":
    main()
