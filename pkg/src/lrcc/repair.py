"""Erasure streams and the repair engine (local, sliding-window, tail-biting)."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field as dc_field
from math import ceil
from typing import Any, Iterable, Sequence

from . import linalg
from .convcode import ConvCode, CatastrophicCodeError, associated_block_code
from .lrcc import LrccCode

ERASED = None


class RepairError(RuntimeError):
    pass


class RepairStall(RepairError):
    def __init__(self, t: int, erased: list, tried: list):
        super().__init__(f"stalled at t={t}: {len(erased)} erasures in block, "
                         f"no window j in {tried} is correctable")
        self.t = t
        self.erased = erased
        self.tried = tried


class InconsistentSymbols(RepairError):
    pass


@dataclass
class ErasureStream:
    """Blocks over F with None marking an erasure."""

    blocks: list
    n: int

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int | None]]) -> "ErasureStream":
        blocks = [list(b) for b in blocks]
        n = len(blocks[0]) if blocks else 0
        if any(len(b) != n for b in blocks):
            raise ValueError("blocks of unequal length")
        return cls(blocks, n)

    @property
    def T(self) -> int:
        return len(self.blocks)

    def copy(self) -> "ErasureStream":
        return ErasureStream([list(b) for b in self.blocks], self.n)

    def erased(self, t: int | None = None) -> list:
        if t is not None:
            return [c for c, x in enumerate(self.blocks[t]) if x is ERASED]
        return [(s, c) for s, b in enumerate(self.blocks) for c, x in enumerate(b) if x is ERASED]

    def count(self, t0: int = 0, t1: int | None = None) -> int:
        t1 = self.T - 1 if t1 is None else t1
        return sum(1 for s in range(t0, t1 + 1) for x in self.blocks[s] if x is ERASED)

    @property
    def complete(self) -> bool:
        return all(x is not ERASED for b in self.blocks for x in b)


@dataclass
class RepairEvent:
    t: int
    mode: str
    group: int | None = None
    j: int | None = None
    window: tuple | None = None
    contacted_nodes: int = 0
    downloaded_symbols: int = 0
    solved_unknowns: int = 0
    success: bool = True
    reads: frozenset = dc_field(default=frozenset(), repr=False, compare=False)

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("reads")
        if d["window"] is not None:
            d["window"] = list(d["window"])
        return d


@dataclass
class RepairReport:
    events: list = dc_field(default_factory=list)
    unrecovered: list = dc_field(default_factory=list)

    def add(self, ev: RepairEvent) -> None:
        self.events.append(ev)

    @property
    def totals(self) -> dict:
        ev = self.events
        return {
            "local_repairs": sum(1 for e in ev if e.mode == "local"),
            "window_repairs": sum(1 for e in ev if e.mode in ("window", "tailbiting")),
            "downloaded_symbols": sum(e.downloaded_symbols for e in ev),
            "contacted_nodes": sum(e.contacted_nodes for e in ev),
            "solved_unknowns": sum(e.solved_unknowns for e in ev),
            "unrecovered": len(self.unrecovered),
        }

    @property
    def success(self) -> bool:
        return not self.unrecovered

    def to_json(self) -> dict:
        return {"v": 1, "events": [e.to_json() for e in self.events],
                "unrecovered": [list(p) for p in self.unrecovered], "totals": self.totals}

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["t", "mode", "group", "j", "window", "contacted_nodes",
                "downloaded_symbols", "solved_unknowns", "success"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for e in self.events:
            d = e.to_json()
            if d["window"] is not None:
                d["window"] = f"{d['window'][0]}-{d['window'][1]}"
            w.writerow(["" if d[c] is None else d[c] for c in cols])
        return buf.getvalue()


@dataclass(frozen=True)
class WindowPolicy:
    j_max: int = 2
    local_first: bool = True
    stall: str = "error"
    max_passes: int = 4
    fast_path: bool = False
    view: str = "full"

    def __post_init__(self):
        if self.stall not in ("error", "skip"):
            raise ValueError("stall must be 'error' or 'skip'")
        if self.view not in ("full", "restricted"):
            raise ValueError("view must be 'full' or 'restricted'")
        if self.j_max < 0:
            raise ValueError("j_max must be non-negative")


def inject_erasures(v: Sequence[Sequence[int]], pattern: Iterable) -> ErasureStream:
    s = ErasureStream.from_blocks(v)
    for t, c in pattern:
        if not (0 <= t < s.T and 0 <= c < s.n):
            raise IndexError(f"erasure ({t}, {c}) out of range")
        s.blocks[t][c] = ERASED
    return s


def window_budget_ok(pattern: Iterable, T: int, distances: Sequence[int], j: int) -> bool:
    """Every (j+1)-window holds at most d_j - 1 erasures.

    Windows cut short by the end of the stream use the budget of their length.
    """
    per = [0] * T
    for t, _ in pattern:
        per[t] += 1
    for t in range(T):
        h = min(j, T - 1 - t)
        if sum(per[t:t + h + 1]) > distances[h] - 1:
            return False
    return True


# --- local repair -----------------------------------------------------------

def _local_matrix(C: LrccCode, i: int) -> list:
    cache = C.__dict__.setdefault("_local_cache", {})
    if i not in cache:
        C0 = associated_block_code(C.code)
        cache[i] = linalg.select_columns(C0, C.structure.groups[i])
    return cache[i]


def local_repair(C: LrccCode, s: ErasureStream, t: int, i: int) -> RepairEvent:
    """Erasure-decode group i of block t in place from symbols of that group only."""
    F = C.code.field
    grp = C.structure.groups[i]
    block = s.blocks[t]
    erased = [a for a, c in enumerate(grp) if block[c] is ERASED]
    if not erased:
        return RepairEvent(t, "local", group=i, solved_unknowns=0)
    if len(erased) > C.structure.pd - 1:
        raise RepairError(f"group {i} at t={t} has {len(erased)} erasures > pd-1")
    M = _local_matrix(C, i)
    cols = linalg.transpose(M)
    known = [a for a in range(len(grp)) if block[grp[a]] is not ERASED]
    ecols = [cols[a] for a in erased]
    chosen: list[int] = []
    rk = 0

    def determined() -> bool:
        # erased symbols are functions of the chosen ones
        return linalg.rank(F, [cols[b] for b in chosen] + ecols) == rk

    for a in known:
        if determined():
            break
        r2 = linalg.rank(F, [cols[b] for b in chosen + [a]])
        if r2 > rk:
            chosen.append(a)
            rk = r2
    if not determined():
        raise RepairError(f"group {i} at t={t} not locally recoverable")
    reads = frozenset((t, grp[a]) for a in chosen)
    vals = [block[grp[a]] for a in chosen]
    y = linalg.solve(F, [cols[a] for a in chosen], vals)
    if y is None:
        raise InconsistentSymbols(f"group {i} at t={t}: symbols are not a local codeword")
    for a in erased:
        block[grp[a]] = sum_prod(F, y, cols[a])
    return RepairEvent(t, "local", group=i, contacted_nodes=len(chosen),
                       downloaded_symbols=len(chosen), solved_unknowns=len(erased), reads=reads)


def sum_prod(F, x: Sequence[int], y: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(x, y):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


# --- sliding-window repair ----------------------------------------------------

def _parity_depth(C: ConvCode) -> int:
    return max(C.H.degree, 0) if C.H is not None and C.H.rows else 0


@dataclass
class _WindowPlan:
    unknowns: list
    E: list
    R: list
    pivots: list
    determined: dict
    zero_rows: list
    eq_cols: list


class WindowSolver:
    """Parity-check window systems with cached eliminations.

    A window at time t uses blocks t-p .. t+h, with p = min(t, deg H) and h the
    (possibly end-truncated) window index.  The plan depends only on
    (p, h, erasure masks), so it is cached.
    """

    def __init__(self, C: ConvCode):
        C.require_non_catastrophic()
        if C.H is None:
            raise CatastrophicCodeError("no parity check available")
        self.C = C
        self.F = C.field
        self.nu = _parity_depth(C)
        self._sliding: dict = {}
        self._plans: dict = {}

    def _columns(self, p: int, h: int) -> list:
        key = (p, h)
        if key not in self._sliding:
            C = self.C
            c = C.n - C.k
            Hs = C.parity_sliding(p + h).data
            self._sliding[key] = [row[p * c:] for row in Hs]
        return self._sliding[key]

    def plan(self, p: int, h: int, masks: tuple) -> _WindowPlan:
        key = (p, h, masks)
        pl = self._plans.get(key)
        if pl is not None:
            return pl
        F, n = self.F, self.C.n
        rows = self._columns(p, h)
        unknowns = [b * n + c for b, mask in enumerate(masks) for c in range(n) if mask >> c & 1]
        A = linalg.transpose([rows[u] for u in unknowns]) if unknowns else []
        neq = len(rows[0]) if rows else 0
        if not unknowns:
            A = [[] for _ in range(neq)]
        aug = [list(A[e]) + [1 if e == f else 0 for f in range(neq)] for e in range(neq)]
        Raug, pivots = linalg.rref(F, aug, len(unknowns))
        nu_ = len(unknowns)
        R = [row[:nu_] for row in Raug]
        E = [row[nu_:] for row in Raug]
        pivset = set(pivots)
        free = [c for c in range(nu_) if c not in pivset]
        determined = {}
        for ri, pc in enumerate(pivots):
            if all(R[ri][f] == 0 for f in free):
                determined[pc] = ri
        zero_rows = list(range(len(pivots), neq))
        pl = _WindowPlan(unknowns, E, R, pivots, determined, zero_rows, rows)
        self._plans[key] = pl
        return pl

    def window(self, s: ErasureStream, t: int, j: int):
        p = min(t, self.nu)
        h = min(j, s.T - 1 - t)
        masks = tuple(sum(1 << c for c, x in enumerate(s.blocks[b]) if x is ERASED)
                      for b in range(t - p, t + h + 1))
        return p, h, masks

    def target_indices(self, pl: _WindowPlan, p: int) -> list:
        n = self.C.n
        return [i for i, u in enumerate(pl.unknowns) if u // n == p]

    def correctable(self, s: ErasureStream, t: int, j: int) -> bool:
        p, h, masks = self.window(s, t, j)
        pl = self.plan(p, h, masks)
        return all(i in pl.determined for i in self.target_indices(pl, p))

    def solve(self, s: ErasureStream, t: int, j: int, commit_all: bool = False):
        """Solve the window; write determined unknowns of block t (or all)."""
        F, n = self.F, self.C.n
        p, h, masks = self.window(s, t, j)
        pl = self.plan(p, h, masks)
        targets = self.target_indices(pl, p)
        if not all(i in pl.determined for i in targets):
            raise RepairError(f"window (t={t}, j={j}) does not determine block {t}")
        w = []
        for b in range(t - p, t + h + 1):
            w.extend(0 if x is ERASED else x for x in s.blocks[b])
        syn = linalg.vecmat(F, w, pl.eq_cols)
        rhs = [F.neg(x) for x in syn]
        Eb = linalg.matvec(F, pl.E, rhs) if pl.E and pl.E[0] else [0] * len(rhs)
        if any(Eb[r] for r in pl.zero_rows):
            raise InconsistentSymbols(f"window (t={t}, j={j}) parity equations inconsistent")
        chosen = list(pl.determined) if commit_all else targets
        for i in chosen:
            u = pl.unknowns[i]
            s.blocks[t - p + u // n][u % n] = Eb[pl.determined[i]]
        reads = frozenset((t - p + pos // n, pos % n) for pos in range(len(w))
                          if not masks[pos // n] >> (pos % n) & 1)
        return p, h, len(chosen), reads


def window_correctable(C: ConvCode, t: int, j: int, s: ErasureStream,
                       solver: WindowSolver | None = None, allow_unknown_prefix: bool = False) -> bool:
    """True iff the parity equations at times t..t+j pin down every erasure of block t."""
    solver = solver or WindowSolver(C)
    if not allow_unknown_prefix:
        p = min(t, solver.nu)
        if any(x is ERASED for b in range(t - p, t) for x in s.blocks[b]):
            raise RepairError(f"prefix before t={t} has unknown symbols")
    return solver.correctable(s, t, j)


def _prefix_reads(C, p: int, view: str) -> int:
    if view == "restricted" and isinstance(C, LrccCode):
        return p * C.N
    code = C.code if isinstance(C, LrccCode) else C
    return p * code.n


def sliding_window_repair(C: ConvCode | LrccCode, s: ErasureStream, t: int, j: int,
                          solver: WindowSolver | None = None, commit_all: bool = False,
                          view: str = "full", allow_unknown_prefix: bool = False) -> RepairEvent:
    """Recover the erasures of block t from the window t..t+j and a known prefix."""
    code = C.code if isinstance(C, LrccCode) else C
    solver = solver or WindowSolver(code)
    if not window_correctable(code, t, j, s, solver, allow_unknown_prefix):
        raise RepairError(f"window (t={t}, j={j}) is not correctable")
    p, h, solved, reads = solver.solve(s, t, j, commit_all)
    window_reads = [r for r in reads if r[0] >= t]
    pre = _prefix_reads(C, p, view)
    n_read = len(window_reads) + pre
    return RepairEvent(t, "window", j=j, window=(t, t + h), contacted_nodes=n_read,
                       downloaded_symbols=n_read, solved_unknowns=solved, reads=reads)


def adaptive_repair(C: LrccCode | ConvCode, s: ErasureStream, policy: WindowPolicy | None = None,
                    start: int = 0, mode_tag: str = "window", wrap: int = 0):
    """Local repair first, then the smallest correctable window per erased block.

    With ``wrap`` > 0 the last ``wrap`` blocks of ``s`` mirror its first ones;
    they only feed windows and are refreshed before each block is handled.
    Returns (repaired stream copy, RepairReport).
    """
    policy = policy or WindowPolicy()
    code = C.code if isinstance(C, LrccCode) else C
    code.require_non_catastrophic()
    out = s.copy()
    rep = RepairReport()
    solver = WindowSolver(code)
    lr = isinstance(C, LrccCode)
    end = out.T - wrap

    def sync():
        for i in range(wrap):
            out.blocks[end + i] = list(out.blocks[i])

    def local_pass():
        if not (lr and policy.local_first):
            return
        for t in range(start, end):
            for i, grp in enumerate(C.structure.groups):
                e = sum(1 for c in grp if out.blocks[t][c] is ERASED)
                if 0 < e <= C.structure.pd - 1:
                    rep.add(local_repair(C, out, t, i))

    local_pass()
    skip = policy.stall == "skip"
    for _ in range(policy.max_passes if skip else 1):
        progress = False
        stalled = []
        for t in range(start, end):
            if not out.erased(t):
                continue
            sync()
            tried = []
            for j in range(policy.j_max + 1):
                h = min(j, out.T - 1 - t)
                if tried and h == tried[-1]:
                    continue
                tried.append(h)
                if window_correctable(code, t, j, out, solver, allow_unknown_prefix=skip):
                    ev = sliding_window_repair(C, out, t, j, solver, policy.fast_path,
                                               policy.view, allow_unknown_prefix=skip)
                    ev.mode = mode_tag
                    rep.add(ev)
                    progress = True
                    break
            else:
                if not skip:
                    raise RepairStall(t, out.erased(t), tried)
                stalled.append(t)
        if not stalled or not progress:
            break
        local_pass()
    rep.unrecovered = [tuple(p) for p in out.erased() if start <= p[0] < end]
    if wrap:
        out.blocks = out.blocks[:end]
    return out, rep


# --- cost formulas ------------------------------------------------------------

def repair_cost_formulas(n: int, k: int, r: int, pd: int, mu: int, j: int,
                         baseline_len: int | None = None) -> dict:
    """Closed-form read counts for a window repair at index j.

    window_read is n(j+1) minus the largest correctable erasure count.
    """
    size = r + pd - 1
    if n % size:
        raise ValueError("n must be a multiple of r + pd - 1")
    g = n // size
    groups = ceil(k * (j + 1) / r)
    out = {
        "window_read": k * (j + 1) + (groups - 1) * (pd - 1),
        "prefix_read": mu * (n - g * (pd - 1)),
        "prefix_read_full": mu * n,
    }
    if baseline_len is not None:
        lam = baseline_len
        out["lrc_baseline_read"] = k * (lam + 1) + (ceil(k * (lam + 1) / r) - 1) * (pd - 1)
    return out


# --- tail-biting ----------------------------------------------------------------

def tail_biting_encode(C: ConvCode, u: Sequence[Sequence[int]]) -> list:
    """Wrap-around encoding: v_t = sum_h u_{(t-h) mod T} G_h."""
    T = len(u)
    if T <= C.memory:
        raise ValueError("tail-biting needs more blocks than the memory")
    F = C.field
    out = []
    for t in range(T):
        acc = [0] * C.n
        for h, Gh in enumerate(C.coeffs):
            part = linalg.vecmat(F, u[(t - h) % T], Gh)
            acc = [F.add(a, b) for a, b in zip(acc, part)]
        out.append(acc)
    return out


def wrapped_parity_ok(C: ConvCode, v: Sequence[Sequence[int]]) -> bool:
    """Check sum_h v_{(s-h) mod T} H_h^T = 0 for every s."""
    F = C.field
    T = len(v)
    Ht = [linalg.transpose(Hh) for Hh in C.parity_coeffs]
    for s in range(T):
        acc = [0] * (C.n - C.k)
        for h, Hh in enumerate(Ht):
            part = linalg.vecmat(F, v[(s - h) % T], Hh)
            acc = [F.add(a, b) for a, b in zip(acc, part)]
        if any(acc):
            return False
    return True


def clean_anchors(C: ConvCode, s: ErasureStream) -> list:
    """Start indices t0 whose deg(H) cyclically consecutive blocks are erasure-free."""
    nu = _parity_depth(C)
    return [t0 for t0 in range(s.T)
            if all(not s.erased((t0 + i) % s.T) for i in range(nu))]


def tail_biting_repair(C: LrccCode | ConvCode, s: ErasureStream, anchor: int,
                       policy: WindowPolicy | None = None):
    """Unroll the cyclic stream at ``anchor`` and repair after the clean run."""
    code = C.code if isinstance(C, LrccCode) else C
    nu = _parity_depth(code)
    T = s.T
    if any(s.erased((anchor + i) % T) for i in range(nu)):
        raise RepairError(f"anchor {anchor} is not followed by {nu} clean blocks")
    policy = policy or WindowPolicy()
    order = [(anchor + i) % T for i in range(T)]
    wrap = min(policy.j_max, T)
    unrolled = ErasureStream([list(s.blocks[t]) for t in order + order[:wrap]], s.n)
    fixed, rep = adaptive_repair(C, unrolled, policy, start=nu, mode_tag="tailbiting", wrap=wrap)
    out = s.copy()
    for i, t in enumerate(order):
        out.blocks[t] = list(fixed.blocks[i])
    for ev in rep.events:
        ev.t = order[ev.t]
        if ev.window is not None:
            ev.window = (order[ev.window[0]], order[ev.window[1] % T])
        ev.reads = frozenset((order[a % T], c) for a, c in ev.reads)
    rep.unrecovered = sorted((order[a], c) for a, c in rep.unrecovered)
    return out, rep
