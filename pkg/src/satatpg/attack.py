"""Oracle-guided SAT attack: miter, DIP loop, constraint accumulation.

Two copies of the locked circuit share the functional inputs but carry
independent key variables; their outputs are XORed pairwise and ORed into
a single difference literal.  Each satisfying assignment yields a
distinguishing input pattern (DIP); simulating the oracle on it gives the
correct outputs, which are frozen into the formula as two IO-constrained
copies (one per key group).  The loop ends with a mandatory UNSAT, after
which any remaining key is functionally correct.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .circuit import Circuit, simulate
from .cnf import CnfFormula, encode_instance
from .locking import LockedCircuit
from .solver import CdclSolver, ExternalDimacsSolver, ResourceLimitExceeded, Sat

SOLVED = "solved"
NO_DIP = "no_dip_at_first_query"
ABORTED = "aborted"


@dataclass
class AttackConfig:
    seed: int = 0
    conflict_budget: int | None = None
    timeout: float | None = None  # seconds, whole attack
    solver: str = "builtin"  # "builtin" or "extern:<command>"
    dump_cnf: str | None = None  # directory for miter DIMACS dumps
    trace: object = None  # writable stream for per-iteration lines
    use_phase_hints: bool = True


@dataclass
class MiterInstance:
    x_vars: list[int]  # shared functional input variables
    key_a: list[int]
    key_b: list[int]
    po_a: list[int]
    po_b: list[int]
    diff: int  # difference literal; assert to query for a DIP


@dataclass
class AttackResult:
    status: str
    key: tuple[int, ...] | None
    dips: list[tuple[int, ...]]
    iterations: int  # number of miter queries issued

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


def build_miter(lc: LockedCircuit, formula: CnfFormula) -> MiterInstance:
    c = lc.circuit
    n_func = lc.functional_pi_count
    func_nets = c.pi_order[:n_func]
    key_nets = c.pi_order[n_func:]

    x_vars = formula.new_vars(n_func)
    shared_a = dict(zip(func_nets, x_vars))
    map_a = encode_instance(c, formula, shared_a)
    shared_b = dict(zip(func_nets, x_vars))
    map_b = encode_instance(c, formula, shared_b)

    po_a = [map_a[n] for n in c.po_order]
    po_b = [map_b[n] for n in c.po_order]
    xors = []
    for a, b in zip(po_a, po_b):
        x = formula.new_var()
        formula.add_clauses([[-x, a, b], [-x, -a, -b], [x, -a, b], [x, a, -b]])
        xors.append(x)
    diff = formula.new_var()
    for x in xors:
        formula.add_clause([diff, -x])
    formula.add_clause([-diff] + xors)
    return MiterInstance(
        x_vars=x_vars,
        key_a=[map_a[n] for n in key_nets],
        key_b=[map_b[n] for n in key_nets],
        po_a=po_a,
        po_b=po_b,
        diff=diff,
    )


def _make_solver(cfg: AttackConfig, deadline):
    if cfg.solver == "builtin":
        return CdclSolver(seed=cfg.seed, conflict_budget=cfg.conflict_budget,
                          deadline=deadline)
    if cfg.solver.startswith("extern:"):
        return ExternalDimacsSolver(cfg.solver[len("extern:"):], deadline=deadline)
    raise ValueError(f"unknown solver spec {cfg.solver!r}")


def run_attack(lc: LockedCircuit, oracle: Circuit,
               cfg: AttackConfig | None = None) -> AttackResult:
    """Run the DIP loop on ``lc`` against the in-memory ``oracle``.

    Statuses: ``solved`` (key recovered, final query UNSAT), ``no_dip``
    (first query UNSAT: every mapped fault is redundant), ``aborted``
    (resource limit; partial DIP list, never misreported as redundancy).
    """
    cfg = cfg or AttackConfig()
    if oracle.num_pis != lc.functional_pi_count:
        raise ValueError(
            f"oracle PI count {oracle.num_pis} != locked functional PI count "
            f"{lc.functional_pi_count}"
        )
    if oracle.num_pos != lc.circuit.num_pos:
        raise ValueError("oracle and locked circuit PO counts differ")

    deadline = None
    if cfg.timeout is not None:
        deadline = time.monotonic() + cfg.timeout

    formula = CnfFormula()
    miter = build_miter(lc, formula)
    if cfg.dump_cnf:
        from pathlib import Path

        d = Path(cfg.dump_cnf)
        d.mkdir(parents=True, exist_ok=True)
        (d / "miter.cnf").write_text(formula.to_dimacs(), encoding="utf-8")

    solver = _make_solver(cfg, deadline)
    solver.add_formula(formula)

    c = lc.circuit
    n_func = lc.functional_pi_count
    func_nets = c.pi_order[:n_func]
    key_nets = c.pi_order[n_func:]

    dips: list[tuple[int, ...]] = []
    seen = set()
    iterations = 0
    phase_hints: dict[int, bool] = {}

    while True:
        iterations += 1
        try:
            verdict = solver.solve(
                assumptions=[miter.diff],
                phase_hints=phase_hints if cfg.use_phase_hints else None,
            )
        except ResourceLimitExceeded:
            return AttackResult(ABORTED, None, dips, iterations)
        if not verdict:
            if iterations == 1:
                return AttackResult(NO_DIP, None, [], 1)
            break

        dip = tuple(int(verdict.value(v)) for v in miter.x_vars)
        assert dip not in seen, "miter returned a repeated DIP"
        seen.add(dip)
        dips.append(dip)
        outs = simulate(oracle, dip)
        if cfg.trace is not None:
            cfg.trace.write(
                f"iter={iterations} dip={''.join(map(str, dip))} "
                f"oracle={''.join(map(str, outs))} "
                f"clauses={len(formula.clauses)}\n"
            )

        # two fresh IO-constrained copies, one per key-variable group
        for key_vars in (miter.key_a, miter.key_b):
            shared = dict(zip(key_nets, key_vars))
            start = len(formula.clauses)
            vm = encode_instance(c, formula, shared)
            for n, bit in zip(func_nets, dip):
                formula.add_clause([vm[n] if bit else -vm[n]])
            for n, bit in zip(c.po_order, outs):
                formula.add_clause([vm[n] if bit else -vm[n]])
            solver.ensure_num_vars(formula.num_vars)
            solver.add_clauses(formula.clauses[start:])
        if cfg.use_phase_hints:
            phase_hints = {v: verdict.value(v) for v in miter.key_a}

    try:
        final = solver.solve(assumptions=[])
    except ResourceLimitExceeded:
        return AttackResult(ABORTED, None, dips, iterations)
    assert isinstance(final, Sat), "accumulated IO constraints became unsatisfiable"
    key = tuple(int(final.value(v)) for v in miter.key_a)
    return AttackResult(SOLVED, key, dips, iterations)
