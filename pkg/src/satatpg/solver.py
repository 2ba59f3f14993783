"""SAT backends: a self-contained CDCL solver and a DIMACS process adapter.

The built-in solver implements unit propagation over two watched
literals, first-UIP conflict analysis with non-chronological backjumping,
activity-based (VSIDS-style) decisions, phase saving, and Luby restarts.
Assumptions are handled as forced first decisions, so key-value probing
never mutates the clause database.
"""

from __future__ import annotations

import heapq
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from random import Random

from .cnf import CnfFormula, check_model


class ResourceLimitExceeded(Exception):
    """Conflict budget or wall-clock deadline hit; never means unsatisfiable."""


@dataclass(frozen=True)
class Sat:
    model: tuple[bool, ...]  # indexed by DIMACS variable; model[0] unused

    def __bool__(self):
        return True

    def value(self, var: int) -> bool:
        return self.model[var]


@dataclass(frozen=True)
class Unsat:
    def __bool__(self):
        return False


@dataclass
class SolverStats:
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    max_backjump: int = 0
    learned: int = 0


def _luby(x: int) -> int:
    # Luby sequence 1,1,2,1,1,2,4,... for x = 0,1,2,...
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x %= size
    return 1 << seq


class CdclSolver:
    """Incremental CDCL solver over DIMACS-style signed-int literals.

    Learned clauses persist across :meth:`solve` calls, which is sound
    because the clause database only grows.
    """

    VAR_DECAY = 0.95
    RESTART_BASE = 100

    def __init__(self, seed: int = 0, conflict_budget: int | None = None,
                 deadline: float | None = None):
        self._rng = Random(seed)
        self.conflict_budget = conflict_budget
        self.deadline = deadline  # time.monotonic() timestamp
        self.stats = SolverStats()
        self.num_vars = 0
        self._clauses: list[list[int]] = []  # internal-lit clauses
        self._watches: list[list[list[int]]] = []  # per internal lit
        self._assign: list[int] = []  # per var: -1 / 0 / 1
        self._level: list[int] = []
        self._reason: list[list[int] | None] = []
        self._polarity: list[bool] = []
        self._activity: list[float] = []
        self._var_inc = 1.0
        self._heap: list[tuple[float, int]] = []
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._seen: list[bool] = []
        self._units: list[int] = []  # external unit-clause lits
        self._unsat0 = False

    # -- variables and clauses -------------------------------------------

    def ensure_num_vars(self, n: int) -> None:
        while self.num_vars < n:
            self.num_vars += 1
            self._assign.append(-1)
            self._level.append(0)
            self._reason.append(None)
            self._polarity.append(False)
            act = self._rng.random() * 1e-5
            self._activity.append(act)
            heapq.heappush(self._heap, (-act, self.num_vars - 1))
            self._watches.append([])
            self._watches.append([])
            self._seen.append(False)

    def add_clause(self, lits) -> None:
        lits = list(dict.fromkeys(lits))
        if not lits:
            self._unsat0 = True
            return
        top = max(abs(l) for l in lits)
        self.ensure_num_vars(top)
        vs = {abs(l) for l in lits}
        if len(vs) < len(lits):  # tautology p v -p
            return
        if len(lits) == 1:
            self._units.append(lits[0])
            return
        cl = [self._to_internal(l) for l in lits]
        self._attach(cl)
        self._clauses.append(cl)

    def add_clauses(self, clauses) -> None:
        for cl in clauses:
            self.add_clause(cl)

    def add_formula(self, formula: CnfFormula) -> None:
        self.ensure_num_vars(formula.num_vars)
        self.add_clauses(formula.clauses)

    @staticmethod
    def _to_internal(lit: int) -> int:
        v = abs(lit) - 1
        return 2 * v if lit > 0 else 2 * v + 1

    def _attach(self, cl: list[int]) -> None:
        # watches[lit] holds the clauses currently watching lit
        self._watches[cl[0]].append(cl)
        self._watches[cl[1]].append(cl)

    # -- assignment machinery --------------------------------------------

    def _value(self, lit: int) -> int:
        a = self._assign[lit >> 1]
        if a < 0:
            return -1
        return a ^ (lit & 1)

    def _enqueue(self, lit: int, reason=None) -> bool:
        val = self._value(lit)
        if val >= 0:
            return val == 1
        v = lit >> 1
        self._assign[v] = 1 - (lit & 1)
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)
        return True

    def _propagate(self):
        assign = self._assign
        watches = self._watches
        trail = self._trail
        level = self._level
        reason = self._reason
        props = 0
        while self._qhead < len(trail):
            p = trail[self._qhead]
            self._qhead += 1
            props += 1
            falsified = p ^ 1
            ws = watches[falsified]
            i = j = 0
            n = len(ws)
            while i < n:
                cl = ws[i]
                i += 1
                if cl[0] == falsified:
                    cl[0], cl[1] = cl[1], cl[0]
                first = cl[0]
                a = assign[first >> 1]
                if a >= 0 and a ^ (first & 1) == 1:
                    ws[j] = cl
                    j += 1
                    continue
                moved = False
                for k in range(2, len(cl)):
                    lk = cl[k]
                    ak = assign[lk >> 1]
                    if ak < 0 or ak ^ (lk & 1):
                        cl[1], cl[k] = lk, cl[1]
                        watches[lk].append(cl)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = cl
                j += 1
                if a >= 0:
                    # conflict: keep the remaining watchers in place
                    while i < n:
                        ws[j] = ws[i]
                        i += 1
                        j += 1
                    del ws[j:]
                    self._qhead = len(trail)
                    self.stats.propagations += props
                    return cl
                v = first >> 1
                assign[v] = 1 - (first & 1)
                level[v] = len(self._trail_lim)
                reason[v] = cl
                trail.append(first)
            del ws[j:]
        self.stats.propagations += props
        return None

    def _cancel_until(self, level: int) -> None:
        if len(self._trail_lim) <= level:
            return
        bound = self._trail_lim[level]
        for lit in reversed(self._trail[bound:]):
            v = lit >> 1
            self._polarity[v] = self._assign[v] == 1
            self._assign[v] = -1
            self._reason[v] = None
            heapq.heappush(self._heap, (-self._activity[v], v))
        del self._trail[bound:]
        del self._trail_lim[level:]
        self._qhead = len(self._trail)

    def _bump(self, v: int) -> None:
        self._activity[v] += self._var_inc
        if self._activity[v] > 1e100:
            for u in range(self.num_vars):
                self._activity[u] *= 1e-100
            self._var_inc *= 1e-100
            self._heap = [(-self._activity[u], u) for u in range(self.num_vars)
                          if self._assign[u] < 0]
            heapq.heapify(self._heap)
        elif self._assign[v] < 0:
            # lazy re-push so the new priority is visible; stale duplicate
            # entries are skipped on pop
            heapq.heappush(self._heap, (-self._activity[v], v))

    def _analyze(self, confl: list[int]):
        """First-UIP learning; returns (learnt clause, backjump level)."""
        learnt = [0]
        seen = self._seen
        counter = 0
        p = -1
        index = len(self._trail) - 1
        cur_level = len(self._trail_lim)
        bt = 0
        c = confl
        touched = []
        while True:
            start = 0 if p < 0 else 1
            for q in c[start:]:
                v = q >> 1
                if not seen[v] and self._level[v] > 0:
                    seen[v] = True
                    touched.append(v)
                    self._bump(v)
                    if self._level[v] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self._trail[index] >> 1]:
                index -= 1
            p = self._trail[index]
            c = self._reason[p >> 1]
            counter -= 1
            index -= 1
            if counter == 0:
                break
        learnt[0] = p ^ 1

        # basic minimization: drop a literal whose whole reason is already
        # in the clause (or settled at level 0)
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = self._reason[q >> 1]
            if r is None or any(
                not seen[l >> 1] and self._level[l >> 1] > 0 for l in r[1:]
            ):
                kept.append(q)
        learnt = kept
        for v in touched:
            seen[v] = False

        for q in learnt[1:]:
            if self._level[q >> 1] > bt:
                bt = self._level[q >> 1]
        # watch a literal of the backjump level in slot 1
        if len(learnt) > 1:
            mi = max(range(1, len(learnt)), key=lambda k: self._level[learnt[k] >> 1])
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
        return learnt, bt

    # -- main solve loop ---------------------------------------------------

    def solve(self, assumptions=(), phase_hints: dict[int, bool] | None = None):
        """Decide satisfiability under ``assumptions`` (signed ext lits)."""
        if self._unsat0:
            return Unsat()
        for lit in assumptions:
            self.ensure_num_vars(abs(lit))
        if phase_hints:
            for var, val in phase_hints.items():
                if 1 <= var <= self.num_vars:
                    self._polarity[var - 1] = bool(val)

        self._cancel_until(0)
        # re-scan the root-level trail so clauses added since the last call
        # see assignments that predate their watches
        self._qhead = 0
        for lit in self._units:
            if not self._enqueue(self._to_internal(lit)):
                self._unsat0 = True
                return Unsat()
        if self._propagate() is not None:
            self._unsat0 = True
            return Unsat()

        budget = self.conflict_budget
        conflicts_at_entry = self.stats.conflicts
        restart_idx = 0
        conflicts_since_restart = 0

        while True:
            confl = self._propagate()
            if confl is not None:
                self.stats.conflicts += 1
                conflicts_since_restart += 1
                if not self._trail_lim:
                    self._unsat0 = True
                    return Unsat()
                learnt, bt = self._analyze(confl)
                jump = len(self._trail_lim) - bt
                if jump > self.stats.max_backjump:
                    self.stats.max_backjump = jump
                self._cancel_until(bt)
                if len(learnt) == 1:
                    if not self._enqueue(learnt[0]):
                        self._unsat0 = True
                        return Unsat()
                else:
                    self._attach(learnt)
                    self._clauses.append(learnt)
                    self.stats.learned += 1
                    self._enqueue(learnt[0], learnt)
                self._var_inc /= self.VAR_DECAY
                if budget is not None and (
                    self.stats.conflicts - conflicts_at_entry > budget
                ):
                    raise ResourceLimitExceeded("conflict budget exceeded")
                if self.deadline is not None and time.monotonic() > self.deadline:
                    raise ResourceLimitExceeded("wall-clock deadline exceeded")
                continue

            if conflicts_since_restart >= _luby(restart_idx) * self.RESTART_BASE:
                restart_idx += 1
                conflicts_since_restart = 0
                self.stats.restarts += 1
                self._cancel_until(0)
                continue

            level = len(self._trail_lim)
            if level < len(assumptions):
                p = self._to_internal(assumptions[level])
                val = self._value(p)
                if val == 0:
                    return Unsat()
                self._trail_lim.append(len(self._trail))
                if val < 0:
                    self.stats.decisions += 1
                    self._enqueue(p)
                continue

            v = self._pick_branch_var()
            if v < 0:
                return self._extract_model()
            self.stats.decisions += 1
            self._trail_lim.append(len(self._trail))
            self._enqueue(2 * v + (0 if self._polarity[v] else 1))

    def _pick_branch_var(self) -> int:
        while self._heap:
            _, v = heapq.heappop(self._heap)
            if self._assign[v] < 0:
                return v
        return -1

    def _extract_model(self) -> Sat:
        model = tuple([False] + [self._assign[v] == 1 for v in range(self.num_vars)])
        if __debug__:
            for cl in self._clauses:
                assert any(self._value(l) == 1 for l in cl), "model check failed"
        return Sat(model)


def solve(formula: CnfFormula, assumptions=(), seed: int = 0,
          conflict_budget: int | None = None, deadline: float | None = None):
    """One-shot convenience wrapper around :class:`CdclSolver`."""
    s = CdclSolver(seed=seed, conflict_budget=conflict_budget, deadline=deadline)
    s.add_formula(formula)
    verdict = s.solve(assumptions)
    if __debug__ and isinstance(verdict, Sat):
        assert check_model(formula, verdict.model)
    return verdict


class ExternalDimacsSolver:
    """Adapter for an external solver process speaking DIMACS CNF.

    The command is run as ``<command> <cnf-file>`` and must print either
    ``s SATISFIABLE`` plus ``v`` model lines (SAT-competition style) or a
    bare ``SAT``/``UNSAT`` line followed by model literals.  Assumptions
    are passed as appended unit clauses.
    """

    def __init__(self, command: str, deadline: float | None = None):
        self.argv = shlex.split(command)
        self.deadline = deadline
        self.formula = CnfFormula()
        self.stats = SolverStats()

    @property
    def num_vars(self) -> int:
        return self.formula.num_vars

    def ensure_num_vars(self, n: int) -> None:
        while self.formula.num_vars < n:
            self.formula.new_var()

    def add_clause(self, lits) -> None:
        lits = list(lits)
        self.ensure_num_vars(max(abs(l) for l in lits))
        self.formula.add_clause(lits)

    def add_clauses(self, clauses) -> None:
        for cl in clauses:
            self.add_clause(cl)

    def add_formula(self, formula: CnfFormula) -> None:
        self.ensure_num_vars(formula.num_vars)
        for cl in formula.clauses:
            self.formula.add_clause(cl)

    def solve(self, assumptions=(), phase_hints=None):
        query = self.formula.copy()
        for lit in assumptions:
            while query.num_vars < abs(lit):
                query.new_var()
            query.add_clause([lit])
        timeout = None
        if self.deadline is not None:
            timeout = max(0.01, self.deadline - time.monotonic())
        with tempfile.TemporaryDirectory(prefix="satatpg-") as td:
            path = Path(td) / "query.cnf"
            path.write_text(query.to_dimacs(), encoding="utf-8")
            try:
                proc = subprocess.run(
                    self.argv + [str(path)],
                    capture_output=True,
                    text=True,
                    timeout=timeout,
                )
            except subprocess.TimeoutExpired:
                raise ResourceLimitExceeded("external solver timed out")
        return self._parse_output(proc.stdout, query.num_vars)

    @staticmethod
    def _parse_output(out: str, num_vars: int):
        status = None
        lits: list[int] = []
        for raw in out.splitlines():
            line = raw.strip()
            if not line:
                continue
            u = line.upper()
            if u.startswith("S ") or u in ("SAT", "SATISFIABLE", "UNSAT",
                                           "UNSATISFIABLE"):
                tok = u.split()[-1]
                if "UNSAT" in tok:
                    status = False
                elif "SAT" in tok:
                    status = True
                continue
            if line.startswith(("v", "V")):
                line = line[1:]
            try:
                lits.extend(int(t) for t in line.split())
            except ValueError:
                continue
        if status is False:
            return Unsat()
        if status is None:
            raise RuntimeError(f"unparseable external solver output: {out[:200]!r}")
        model = [False] * (num_vars + 1)
        for lit in lits:
            if lit != 0 and abs(lit) <= num_vars:
                model[abs(lit)] = lit > 0
        return Sat(tuple(model))
