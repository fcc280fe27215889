"""A small complete CDCL solver.

Two watched literals, first-UIP learning with local minimization, VSIDS
branching over a lazy heap, phase saving, Luby restarts and LBD-based
clause database reduction.  Incremental: clauses may be added between
calls to :meth:`CDCLSolver.solve`.

Literals are DIMACS integers at the interface and ``2*var + sign``
internally (``sign`` is 1 for a negated variable).
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"


@dataclass
class Stats:
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
            "restarts": self.restarts,
            "seconds": round(self.seconds, 3),
        }


def luby(i: int) -> int:
    """i-th element (0-based) of the Luby sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class CDCLSolver:
    restart_unit = 100
    var_decay = 0.95
    reduce_first = 2000
    reduce_step = 300

    def __init__(self, nvars: int, clauses: Iterable[Iterable[int]] = (), seed: int = 0):
        self.nvars = nvars
        n2 = 2 * nvars + 2
        self.litval = [-1] * n2
        self.level = [0] * (nvars + 1)
        self.reason: list[Optional[list[int]]] = [None] * (nvars + 1)
        self.watches: list[list[list[int]]] = [[] for _ in range(n2)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.seen = [0] * (nvars + 1)
        self.phase = [1] * (nvars + 1)  # saved sign bit; start with negative phase
        rng = random.Random(seed)
        # tiny seeded jitter breaks activity ties deterministically
        self.activity = [rng.random() * 1e-5 for _ in range(nvars + 1)]
        self.var_inc = 1.0
        self.heap = [(-self.activity[v], v) for v in range(1, nvars + 1)]
        heapq.heapify(self.heap)
        self.clauses: list[list[int]] = []
        self.learnts: list[list[int]] = []
        self.lbd: dict[int, int] = {}
        self.ok = True
        self.stats = Stats()
        self.model: Optional[list[int]] = None
        for c in clauses:
            self.add_clause(c)

    # -- clause management --------------------------------------------------

    def _code(self, lit: int) -> int:
        v = abs(lit)
        if v == 0 or v > self.nvars:
            raise ValueError(f"literal {lit} out of range 1..{self.nvars}")
        return 2 * v + (lit < 0)

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a clause at decision level 0; False once the formula is UNSAT."""
        if not self.ok:
            return False
        self._cancel_until(0)
        litval = self.litval
        clause = []
        for code in sorted({self._code(x) for x in lits}):
            if code ^ 1 in clause or litval[code] == 1:
                return True  # tautology or already satisfied
            if litval[code] == 0:
                continue
            clause.append(code)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self._attach(clause)
        self.clauses.append(clause)
        return True

    def _attach(self, c: list[int]) -> None:
        self.watches[c[0] ^ 1].append(c)
        self.watches[c[1] ^ 1].append(c)

    # -- trail --------------------------------------------------------------

    def _enqueue(self, lit: int, reason: Optional[list[int]]) -> None:
        v = lit >> 1
        self.litval[lit] = 1
        self.litval[lit ^ 1] = 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        trail, litval, phase = self.trail, self.litval, self.phase
        activity, heap = self.activity, self.heap
        stop = self.trail_lim[lvl]
        for idx in range(len(trail) - 1, stop - 1, -1):
            lit = trail[idx]
            v = lit >> 1
            litval[lit] = -1
            litval[lit ^ 1] = -1
            self.reason[v] = None
            phase[v] = lit & 1
            heapq.heappush(heap, (-activity[v], v))
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = stop

    def _propagate(self) -> Optional[list[int]]:
        trail, litval, watches = self.trail, self.litval, self.watches
        level, reason = self.level, self.reason
        dl = len(self.trail_lim)
        props = 0
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            props += 1
            false_lit = p ^ 1
            ws = watches[p]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if litval[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lit = c[k]
                    if litval[lit] != 0:
                        c[1] = lit
                        c[k] = false_lit
                        watches[lit ^ 1].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if litval[first] == 0:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        self.stats.propagations += props
                        return c
                    v = first >> 1
                    litval[first] = 1
                    litval[first ^ 1] = 0
                    level[v] = dl
                    reason[v] = c
                    trail.append(first)
            del ws[j:]
        self.stats.propagations += props
        return None

    # -- conflict analysis --------------------------------------------------

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.nvars + 1):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[u], u) for u in range(1, self.nvars + 1) if self.litval[2 * u] == -1]
            heapq.heapify(self.heap)
        elif self.litval[2 * v] == -1:
            heapq.heappush(self.heap, (-act[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        clause = confl
        while True:
            for q in clause if p == -1 else clause[1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            clause = reason[p >> 1]
            seen[p >> 1] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        # drop literals implied by the rest of the clause
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None or any(not seen[x >> 1] and level[x >> 1] > 0 for x in r[1:]):
                kept.append(q)
        for q in learnt[1:]:
            seen[q >> 1] = 0
        learnt = kept
        if len(learnt) == 1:
            back = 0
        else:
            best = max(range(1, len(learnt)), key=lambda t: level[learnt[t] >> 1])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[learnt[1] >> 1]
        self.var_inc /= self.var_decay
        return learnt, back

    def _reduce_db(self) -> None:
        lbd = self.lbd
        keep = []
        candidates = []
        for c in self.learnts:
            score = lbd.get(id(c), 99)
            if score <= 2 or len(c) <= 2:
                keep.append(c)
            else:
                candidates.append((score, len(c), c))
        candidates.sort(key=lambda t: (t[0], t[1]))
        survivors = [c for _, _, c in candidates[: len(candidates) // 2]]
        dropped = {id(c) for _, _, c in candidates[len(candidates) // 2 :]}
        for key in dropped:
            lbd.pop(key, None)
        self.learnts = keep + survivors
        for ws in self.watches:
            ws[:] = [c for c in ws if id(c) not in dropped]

    # -- search -------------------------------------------------------------

    def _pick_branch(self) -> int:
        heap, litval, act = self.heap, self.litval, self.activity
        while heap:
            neg, v = heapq.heappop(heap)
            if litval[2 * v] == -1 and -neg == act[v]:
                return 2 * v + self.phase[v]
        for v in range(1, self.nvars + 1):
            if litval[2 * v] == -1:
                return 2 * v + self.phase[v]
        return -1

    def solve(
        self,
        max_conflicts: Optional[int] = None,
        time_limit: Optional[float] = None,
        assumptions: Iterable[int] = (),
    ) -> str:
        """Return SAT, UNSAT or UNKNOWN (budget exhausted).

        UNSAT under non-empty ``assumptions`` leaves the solver usable.
        """
        start = time.monotonic()
        self.model = None
        assumed = [self._code(a) for a in assumptions]
        try:
            return self._search(max_conflicts, time_limit, start, assumed)
        finally:
            self.stats.seconds += time.monotonic() - start

    def _search(self, max_conflicts, time_limit, start, assumed) -> str:
        if not self.ok:
            return UNSAT
        self._cancel_until(0)
        if self._propagate() is not None:
            self.ok = False
            return UNSAT
        if max_conflicts is not None and max_conflicts <= 0:
            return UNKNOWN
        conflicts = 0
        restart_idx = 0
        restart_at = luby(restart_idx) * self.restart_unit
        since_restart = 0
        next_reduce = self.reduce_first + len(self.learnts)
        level = self.level
        while True:
            confl = self._propagate()
            if confl is not None:
                conflicts += 1
                since_restart += 1
                self.stats.conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    return UNSAT
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._attach(learnt)
                    self.learnts.append(learnt)
                    self.lbd[id(learnt)] = len({level[x >> 1] for x in learnt})
                    self._enqueue(learnt[0], learnt)
                if max_conflicts is not None and conflicts >= max_conflicts:
                    self._cancel_until(0)
                    return UNKNOWN
                if time_limit is not None and conflicts % 256 == 0:
                    if time.monotonic() - start > time_limit:
                        self._cancel_until(0)
                        return UNKNOWN
                continue
            if since_restart >= restart_at:
                self.stats.restarts += 1
                restart_idx += 1
                restart_at = luby(restart_idx) * self.restart_unit
                since_restart = 0
                self._cancel_until(0)
                if len(self.learnts) >= next_reduce:
                    self._reduce_db()
                    next_reduce = len(self.learnts) + self.reduce_first + self.reduce_step * self.stats.restarts
                continue
            dl = len(self.trail_lim)
            if dl < len(assumed):
                lit = assumed[dl]
                if self.litval[lit] == 0:
                    self._cancel_until(0)
                    return UNSAT
                self.trail_lim.append(len(self.trail))
                if self.litval[lit] == -1:
                    self._enqueue(lit, None)
                continue
            lit = self._pick_branch()
            if lit == -1:
                self.model = [v if self.litval[2 * v] == 1 else -v for v in range(1, self.nvars + 1)]
                self._cancel_until(0)
                return SAT
            self.stats.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)
