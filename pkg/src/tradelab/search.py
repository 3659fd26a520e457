"""Exhaustive search for trades of a prescribed volume.

The engine grows both sides at once.  A state is a pair of partial sides;
any t-subset covered more often on one side than on the other is a deficit,
and the solution must contain a block through it on the short side, so the
search branches over those blocks (fewest candidates first).  When a state
is balanced but short of the target volume, the remainder is itself a trade
and the search seeds it with a new T1 block.

Duplicates are limited in two ways.  A branch excludes the blocks tried by
its earlier siblings from the same side, which partitions the solutions of a
node.  Labels not yet used are interchangeable, so a block may only bring in
the smallest unused labels.  Witnesses are finally deduplicated by canonical
form.
"""
from __future__ import annotations

import logging
import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from itertools import combinations, combinations_with_replacement
from typing import Optional

from .core import (
    CandidatePair,
    ParameterError,
    Side,
    ValidationError,
    _canonical_key,
    canonical_form,
    is_simple,
    is_steiner,
    t_profile,
    validate,
)
from .ttf import save_ttf

log = logging.getLogger(__name__)

MODES = ("steiner", "simple", "general")
PRUNING_RULES = ("capacity", "replication", "spectrum", "mode", "symmetry")

EXHAUSTED = "exhausted-empty"
FOUND = "witnesses-found"
BUDGET = "budget-exceeded"

MAX_LABELS = 24


@dataclass(frozen=True)
class SearchSpec:
    t: int
    k: int
    s: int
    mode: str = "steiner"
    max_foundation: Optional[int] = None
    node_budget: Optional[int] = None
    worker_count: int = 1
    disabled_rules: frozenset = frozenset()
    first_only: bool = False

    def __post_init__(self):
        if not 0 < self.t < self.k:
            raise ParameterError(f"need 0 < t < k, got t={self.t}, k={self.k}")
        if self.s < 1:
            raise ParameterError(f"volume must be positive, got {self.s}")
        if self.mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_foundation is not None and self.max_foundation < 0:
            raise ParameterError("max_foundation must be non-negative")
        if self.node_budget is not None and self.node_budget < 0:
            raise ParameterError("node_budget must be non-negative")
        if self.worker_count < 1:
            raise ParameterError("worker_count must be positive")
        unknown = set(self.disabled_rules) - set(PRUNING_RULES)
        if unknown:
            raise ParameterError(f"unknown pruning rules {sorted(unknown)}")
        object.__setattr__(self, "disabled_rules", frozenset(self.disabled_rules))

    def uses(self, rule: str) -> bool:
        return rule not in self.disabled_rules


@dataclass
class SearchOutcome:
    status: str
    witnesses: tuple = ()
    nodes_visited: int = 0
    max_depth: int = 0
    runtime_seconds: float = 0.0
    spec: Optional[SearchSpec] = None
    auxiliary_nodes: int = 0
    replication_values: tuple = ()

    @property
    def witness_count(self) -> int:
        return len(self.witnesses)


# -- volume arithmetic -------------------------------------------------------

def gap_intervals(t: int) -> list[tuple[int, int]]:
    """Open intervals (2^{t+1} - 2^{t-i}, 2^{t+1} - 2^{t-i-1}) for i = 0..t-1."""
    if t < 1:
        raise ParameterError("t must be positive")
    top = 2 ** (t + 1)
    return [(top - 2 ** (t - i), top - 2 ** (t - i - 1)) for i in range(t)]


def first_gap(t: int) -> tuple[int, int]:
    """The open interval (2^t, 2^t + 2^{t-1}); it coincides with the i=0 gap."""
    return 2**t, 2**t + 2 ** (t - 1)


def forbidden_volumes(t: int) -> list[int]:
    return sorted({s for lo, hi in gap_intervals(t) for s in range(lo + 1, hi)})


def replication_limits(t: int, k: int, s: int, mode: str) -> tuple[int, int]:
    """Smallest and largest possible replication number of a used element.

    The derived trade at x is a (t-1)-trade of volume r_x, hence r_x >= 2^{t-1}.
    In a Steiner trade with k = t+1 every r_x is at most s/2.
    """
    lo = 2 ** (t - 1)
    hi = s // 2 if mode == "steiner" and k == t + 1 else s
    return lo, hi


def foundation_bounds(spec: SearchSpec) -> tuple[int, int]:
    """``(lower, upper)`` bounds on the foundation size.

    Every element occurs in at least 2^{t-1} blocks of each side and the
    incidences total k*s, so at most floor(k*s / 2^{t-1}) elements occur.
    ``lower > upper`` means no trade can exist.
    """
    lower = spec.k + spec.t + 1
    if spec.uses("replication"):
        upper = spec.s * spec.k // 2 ** (spec.t - 1)
    else:
        upper = spec.s * spec.k
    if spec.max_foundation is not None:
        upper = min(upper, spec.max_foundation)
    return lower, upper


# -- replication spectrum ----------------------------------------------------

_spectrum_cache: dict = {}


def _derived_volume_exists(t, k, r, mode, max_foundation, node_budget):
    """Whether a (t)-(k) trade of volume r exists on at most max_foundation labels.

    Returns ``(exists, nodes)``.  An inconclusive search counts as existing.
    """
    if t == 0:
        return r >= 1, 0
    key = (t, k, r, mode, max_foundation, node_budget)
    if key not in _spectrum_cache:
        sub = SearchSpec(t, k, r, mode, max_foundation=max_foundation,
                         node_budget=node_budget, first_only=True)
        out = enumerate_trades(sub)
        _spectrum_cache[key] = (out.status != EXHAUSTED, out.nodes_visited + out.auxiliary_nodes)
    return _spectrum_cache[key]


def replication_spectrum(spec: SearchSpec, upper: int):
    """Allowed replication numbers and the auxiliary search effort spent."""
    lo, hi = replication_limits(spec.t, spec.k, spec.s, spec.mode)
    if not spec.uses("replication"):
        lo, hi = 1, spec.s
    values = list(range(lo, hi + 1))
    aux = 0
    if spec.uses("spectrum") and spec.t >= 2:
        kept = []
        for r in values:
            ok, nodes = _derived_volume_exists(spec.t - 1, spec.k - 1, r, spec.mode,
                                               upper - 1, spec.node_budget)
            aux += nodes
            if ok:
                kept.append(r)
        values = kept
    return values, aux


# -- the engine --------------------------------------------------------------

class _BudgetExceeded(Exception):
    pass


class _StopSearch(Exception):
    pass


class _Engine:
    def __init__(self, spec: SearchSpec, upper: int, allowed: list[int]):
        self.spec = spec
        t, k, s = spec.t, spec.k, spec.s
        self.t, self.k, self.s = t, k, s
        self.n = upper
        self.full = (1 << upper) - 1
        self.cap = math.comb(k, t)
        self.min_rest = 2**t if spec.uses("capacity") else 1
        self.use_capacity = spec.uses("capacity")
        self.use_symmetry = spec.uses("symmetry")
        self.use_mode = spec.uses("mode")
        self.steiner = spec.mode == "steiner" and self.use_mode
        self.simple = spec.mode in ("steiner", "simple") and self.use_mode
        self.allowed = allowed
        # target[r]: least allowed replication >= r, or None
        self.target = [None] * (s + 2)
        for r in range(s + 1, -1, -1):
            if r in allowed:
                self.target[r] = r
            elif r <= s:
                self.target[r] = self.target[r + 1]
        self.rmax = max(allowed) if allowed else 0

        labels = range(upper)
        self.blocks = list(combinations(labels, k))
        self.bmask = [sum(1 << a for a in b) for b in self.blocks]
        tsubs = list(combinations(labels, t))
        tindex = {sub: i for i, sub in enumerate(tsubs)}
        self.tsubs = tsubs
        self.btsub = [tuple(tindex[sub] for sub in combinations(b, t)) for b in self.blocks]
        self.tblocks = [[] for _ in tsubs]
        for b, subs in enumerate(self.btsub):
            for i in subs:
                self.tblocks[i].append(b)

    # state -----------------------------------------------------------------

    def reset(self):
        nb, nt = len(self.blocks), len(self.tsubs)
        self.mult = ([0] * nb, [0] * nb)
        self.excl = ([0] * nb, [0] * nb)
        self.cnt = ([0] * nt, [0] * nt)
        self.rep = ([0] * self.n, [0] * self.n)
        self.size = [0, 0]
        self.deficit = [0, 0]  # total missing coverage on each side
        self.unbalanced = set()
        self.use = [0] * self.n
        self.used = 0
        self.nodes = 0
        self.max_depth = 0
        self.solutions = {}

    def add(self, side, b):
        other = 1 - side
        self.mult[side][b] += 1
        self.size[side] += 1
        cs, co = self.cnt[side], self.cnt[other]
        for i in self.btsub[b]:
            before = cs[i] - co[i]
            cs[i] += 1
            if before < 0:
                self.deficit[side] -= 1
            else:
                self.deficit[other] += 1
            if before == -1:
                self.unbalanced.discard(i)
            elif before == 0:
                self.unbalanced.add(i)
        rep = self.rep[side]
        for a in self.blocks[b]:
            rep[a] += 1
            if self.use[a] == 0:
                self.used |= 1 << a
            self.use[a] += 1

    def remove(self, side, b):
        other = 1 - side
        self.mult[side][b] -= 1
        self.size[side] -= 1
        cs, co = self.cnt[side], self.cnt[other]
        for i in self.btsub[b]:
            before = cs[i] - co[i]
            cs[i] -= 1
            if before <= 0:
                self.deficit[side] += 1
            else:
                self.deficit[other] -= 1
            if before == 1:
                self.unbalanced.discard(i)
            elif before == 0:
                self.unbalanced.add(i)
        rep = self.rep[side]
        for a in self.blocks[b]:
            rep[a] -= 1
            self.use[a] -= 1
            if self.use[a] == 0:
                self.used &= ~(1 << a)

    # feasibility ---------------------------------------------------------------

    def feasible(self):
        s, k = self.s, self.k
        size = self.size
        if self.use_capacity:
            cap = self.cap
            if size[0] + -(-self.deficit[0] // cap) > s or size[1] + -(-self.deficit[1] // cap) > s:
                return False
        target = self.target
        r0, r1 = self.rep
        need0 = need1 = 0
        used = self.used
        a = 0
        while used:
            if used & 1:
                x0, x1 = r0[a], r1[a]
                goal = target[x0 if x0 > x1 else x1]
                if goal is None:
                    return False
                need0 += goal - x0
                need1 += goal - x1
            used >>= 1
            a += 1
        return need0 <= k * (s - size[0]) and need1 <= k * (s - size[1])

    def candidates(self, side, pool):
        """Blocks from ``pool`` that may be added to ``side``: plain ones, then fresh ones."""
        other = self.mult[1 - side]
        mult = self.mult[side]
        excl = self.excl[side]
        cnt = self.cnt[side]
        rep = self.rep[side]
        rmax = self.rmax
        used = self.used
        plain, fresh = [], []
        if self.size[side] >= self.s:
            return plain, fresh
        free = self.full & ~used
        for b in pool:
            if other[b] or excl[b]:
                continue
            if self.simple and mult[b]:
                continue
            if self.steiner and any(cnt[i] for i in self.btsub[b]):
                continue
            if any(rep[a] >= rmax for a in self.blocks[b]):
                continue
            new = self.bmask[b] & free
            if not new:
                plain.append(b)
                continue
            if self.use_symmetry:
                m = bin(new).count("1")
                lowest, f = 0, free
                for _ in range(m):
                    bit = f & -f
                    lowest |= bit
                    f ^= bit
                if new != lowest:
                    continue
            fresh.append((bin(new).count("1"), b))
        fresh.sort()
        return plain, [b for _, b in fresh]

    # search --------------------------------------------------------------------

    def tick(self, depth):
        self.nodes += 1
        if depth > self.max_depth:
            self.max_depth = depth
        if self.budget is not None and self.nodes > self.budget:
            raise _BudgetExceeded

    def choose(self):
        """Pick the branching point: ``(side, plain, fresh)`` or None at a leaf."""
        if not self.unbalanced:
            if self.size[0] == self.s:
                return None
            if self.s - self.size[0] < self.min_rest:
                return 0, [], []
            plain, fresh = self.candidates(0, range(len(self.blocks)))
            return 0, plain, fresh
        best = None
        c0, c1 = self.cnt
        for i in sorted(self.unbalanced):
            side = 0 if c0[i] < c1[i] else 1
            plain, fresh = self.candidates(side, self.tblocks[i])
            n = len(plain) + len(fresh)
            if best is None or n < best[0]:
                best = (n, side, plain, fresh)
                if n <= 1:
                    break
        return best[1:]

    def run(self, depth=0, path=None):
        if path is None or depth >= len(path):
            self.tick(depth)
        if not self.feasible():
            return
        choice = self.choose()
        if choice is None:
            self.record()
            return
        side, plain, fresh = choice
        excl = self.excl[side]
        branches = plain + fresh
        if path is not None and depth < len(path):
            idx = path[depth]
            for b in plain[:idx]:
                excl[b] += 1
            b = branches[idx]
            self.add(side, b)
            self.run(depth + 1, path)
            self.remove(side, b)
            for b in plain[:idx]:
                excl[b] -= 1
            return
        done = []
        try:
            for b in branches:
                self.add(side, b)
                try:
                    self.run(depth + 1)
                finally:
                    self.remove(side, b)
                if b in plain:
                    excl[b] += 1
                    done.append(b)
        finally:
            for b in done:
                excl[b] -= 1

    def frontier(self, depth, limit, path, out):
        """Collect branch paths at ``limit`` depth; solve anything shallower."""
        self.tick(depth)
        if not self.feasible():
            return
        choice = self.choose()
        if choice is None:
            self.record()
            return
        side, plain, fresh = choice
        branches = plain + fresh
        if depth == limit:
            out.extend(path + [i] for i in range(len(branches)))
            return
        excl = self.excl[side]
        for i, b in enumerate(branches):
            self.add(side, b)
            self.frontier(depth + 1, limit, path + [i], out)
            self.remove(side, b)
            if i < len(plain):
                excl[b] += 1
        for b in plain:
            excl[b] -= 1

    def current(self):
        sides = []
        for side in (0, 1):
            blocks = []
            for b, m in enumerate(self.mult[side]):
                blocks.extend([self.blocks[b]] * m)
            sides.append(Side.from_blocks(blocks, k=self.k))
        return CandidatePair(self.t, *sides)

    def record(self):
        try:
            tr = validate(self.current())
        except ValidationError as exc:  # pragma: no cover - engine invariant
            raise AssertionError(f"search produced a non-trade: {exc}") from exc
        if self.spec.mode == "steiner" and not is_steiner(tr):
            return
        if self.spec.mode == "simple" and not is_simple(tr):
            return
        key = _canonical_key(tr)[0]
        key = tuple(map(tuple, key))
        if key not in self.solutions:
            self.solutions[key] = canonical_form(tr)
        if self.spec.first_only:
            raise _StopSearch

    def start(self, budget, path=None):
        """Search from the root (first T1 block is {0..k-1}); returns completion flag."""
        self.reset()
        self.budget = budget
        root = self.blocks.index(tuple(range(self.k)))
        self.add(0, root)
        try:
            self.run(0, path)
        except _BudgetExceeded:
            return False
        except _StopSearch:
            pass
        return True


def _run_task(args):
    spec, upper, allowed, path, budget = args
    engine = _Engine(spec, upper, allowed)
    complete = engine.start(budget, path)
    return complete, engine.nodes, engine.max_depth, list(engine.solutions.items())


def _split_tasks(engine, workers):
    """Expand the tree until there are enough subtrees for the workers."""
    for limit in range(0, 8):
        engine.reset()
        engine.budget = None
        engine.add(0, engine.blocks.index(tuple(range(engine.k))))
        tasks = []
        engine.frontier(0, limit, [], tasks)
        if len(tasks) >= 4 * workers:
            break
    return tasks


def enumerate_trades(spec: SearchSpec) -> SearchOutcome:
    """Exhaustively search for trades matching ``spec``.

    All isomorphism classes are returned (one canonical trade each) unless
    ``spec.first_only`` is set.  A search cut short by the node budget reports
    ``budget-exceeded`` and never claims emptiness.
    """
    started = time.perf_counter()
    lower, upper = foundation_bounds(spec)

    def outcome(status, witnesses=(), nodes=0, depth=0, aux=0, allowed=()):
        return SearchOutcome(status, tuple(witnesses), nodes, depth,
                             time.perf_counter() - started, spec, aux, tuple(allowed))

    if lower > upper or upper > MAX_LABELS:
        if lower > upper:
            return outcome(EXHAUSTED)
        raise ParameterError(f"foundation bound {upper} exceeds the engine limit {MAX_LABELS}")
    if spec.uses("capacity") and spec.s < 2**spec.t:
        return outcome(EXHAUSTED)
    allowed, aux = replication_spectrum(spec, upper)
    if not allowed:
        return outcome(EXHAUSTED, aux=aux)

    engine = _Engine(spec, upper, allowed)
    budget = spec.node_budget
    if spec.worker_count == 1 or spec.first_only:
        complete = engine.start(budget)
        sols = engine.solutions
        nodes, depth = engine.nodes, engine.max_depth
    else:
        tasks = _split_tasks(engine, spec.worker_count)
        nodes, depth = engine.nodes, engine.max_depth
        sols = dict(engine.solutions)
        complete = budget is None or nodes <= budget
        if complete:
            from concurrent.futures import ProcessPoolExecutor
            remaining = None if budget is None else budget - nodes
            jobs = [(spec, upper, allowed, p, remaining) for p in tasks]
            with ProcessPoolExecutor(spec.worker_count) as pool:
                for ok, n, d, found in pool.map(_run_task, jobs):
                    nodes += n
                    depth = max(depth, d)
                    complete = complete and ok
                    sols.update(found)
            if budget is not None and nodes > budget:
                complete = False

    witnesses = [sols[key] for key in sorted(sols)]
    if not complete:
        status = BUDGET
    else:
        status = FOUND if witnesses else EXHAUSTED
    log.info("search t=%d k=%d s=%d %s: %s after %d nodes", spec.t, spec.k, spec.s,
             spec.mode, status, nodes)
    return outcome(status, witnesses, nodes, depth, aux, allowed)


# -- gap verification ----------------------------------------------------------

@dataclass
class GapReport:
    t: int
    mode: str
    outcomes: dict = field(default_factory=dict)

    @property
    def statuses(self) -> dict:
        return {s: out.status for s, out in self.outcomes.items()}

    @property
    def verdict(self) -> str:
        """``verified``, ``failed`` (a witness exists) or ``inconclusive``."""
        statuses = set(self.statuses.values())
        if FOUND in statuses:
            return "failed"
        if BUDGET in statuses:
            return "inconclusive"
        return "verified"


def verify_gaps(t: int, mode: str = "steiner", budget: Optional[int] = None,
                workers: int = 1, max_foundation: Optional[int] = None) -> GapReport:
    """Search every forbidden volume of strength ``t`` with k = t+1."""
    if t < 2:
        raise ParameterError("gap verification needs t >= 2")
    report = GapReport(t, mode)
    for s in forbidden_volumes(t):
        spec = SearchSpec(t, t + 1, s, mode, max_foundation=max_foundation,
                          node_budget=budget, worker_count=workers)
        report.outcomes[s] = enumerate_trades(spec)
    return report


# -- brute force oracle --------------------------------------------------------

def brute_force_oracle(t: int, k: int, s: int, max_labels: int) -> list:
    """Every trade of volume ``s`` on labels ``0..max_labels-1``, one per class.

    All s-multisets of blocks are generated and grouped by t-profile; every
    ordered pair inside a group goes through :func:`validate`.  There is no
    pruning and no symmetry reduction.  Only for tiny parameters.
    """
    if not 0 < t < k:
        raise ParameterError(f"need 0 < t < k, got t={t}, k={k}")
    if math.comb(max_labels, k) > 30 or s > 4 or s < 1:
        raise ParameterError("brute force oracle refuses: needs C(max_labels, k) <= 30 and s <= 4")
    blocks = list(combinations(range(max_labels), k))
    groups = defaultdict(list)
    for multiset in combinations_with_replacement(blocks, s):
        side = Side.from_blocks(multiset, k=k)
        groups[tuple(t_profile(side, t).items())].append(side)
    classes = {}
    for sides in groups.values():
        for a in sides:
            for b in sides:
                try:
                    tr = validate(CandidatePair(t, a, b))
                except ValidationError:
                    continue
                key = tuple(map(tuple, _canonical_key(tr)[0]))
                if key not in classes:
                    classes[key] = canonical_form(tr)
    return [classes[key] for key in sorted(classes)]


# -- certificate ledger ----------------------------------------------------------

def witness_filename(t: int, k: int, s: int, index: int) -> str:
    return f"witness_t{t}_k{k}_s{s}_{index}.ttf"


def write_witnesses(outcome: SearchOutcome, directory) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    spec = outcome.spec
    paths = []
    for i, tr in enumerate(outcome.witnesses):
        path = directory / witness_filename(spec.t, spec.k, spec.s, i)
        save_ttf(tr, path)
        paths.append(path)
    return paths


def ledger_line(outcome: SearchOutcome, witness_files=()) -> str:
    spec = outcome.spec
    files = ",".join(str(p) for p in witness_files) or "-"
    return (f"{spec.t} {spec.k} {spec.s} {spec.mode} {outcome.status} "
            f"{outcome.nodes_visited} {outcome.runtime_seconds:.3f} "
            f"{outcome.witness_count} {files}")


def append_ledger(path, outcome: SearchOutcome, witness_files=()) -> str:
    line = ledger_line(outcome, witness_files)
    with open(path, "a", newline="\n") as fh:
        fh.write(line + "\n")
    return line


def read_ledger(path) -> list:
    """Parse ledger records into dicts."""
    names = ("t", "k", "s", "mode", "status", "nodes_visited", "runtime_seconds",
             "witness_count", "witness_files")
    records = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        fields = line.split(" ")
        if len(fields) != len(names):
            raise ValueError(f"malformed ledger line: {line!r}")
        rec = dict(zip(names, fields))
        for key in ("t", "k", "s", "nodes_visited", "witness_count"):
            rec[key] = int(rec[key])
        rec["runtime_seconds"] = float(rec["runtime_seconds"])
        rec["witness_files"] = [] if rec["witness_files"] == "-" else rec["witness_files"].split(",")
        records.append(rec)
    return records
