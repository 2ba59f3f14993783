"""Shared test helpers: an independent exhaustive oracle and circuit generators.

The truth-table oracle works directly on the parsed AST with big-int bit
columns (one bit per input pattern), entirely separate from the package's
simulation, locking, and SAT machinery, so it can referee them.
"""

from __future__ import annotations

from random import Random

from satatpg.bench_io import BenchAst
from satatpg.faults import Fault

_OPS = {
    "AND": lambda ins, m: _fold(ins, lambda a, b: a & b),
    "NAND": lambda ins, m: m ^ _fold(ins, lambda a, b: a & b),
    "OR": lambda ins, m: _fold(ins, lambda a, b: a | b),
    "NOR": lambda ins, m: m ^ _fold(ins, lambda a, b: a | b),
    "XOR": lambda ins, m: _fold(ins, lambda a, b: a ^ b),
    "XNOR": lambda ins, m: m ^ _fold(ins, lambda a, b: a ^ b),
    "NOT": lambda ins, m: m ^ ins[0],
    "BUF": lambda ins, m: ins[0],
}


def _fold(ins, op):
    v = ins[0]
    for x in ins[1:]:
        v = op(v, x)
    return v


def _topo_assignments(ast: BenchAst):
    done = set(ast.inputs)
    pending = list(ast.assignments)
    ordered = []
    while pending:
        progressed = False
        rest = []
        for a in pending:
            if all(f in done for f in a[2]):
                ordered.append(a)
                done.add(a[0])
                progressed = True
            else:
                rest.append(a)
        assert progressed, "cyclic test circuit"
        pending = rest
    return ordered


def input_columns(n: int) -> list[int]:
    """Column i has bit j set iff input i is 1 in exhaustive pattern j."""
    size = 1 << n
    cols = []
    for i in range(n):
        block = (1 << (1 << i)) - 1  # 2^i zeros then 2^i ones, repeated
        col = 0
        period = 1 << (i + 1)
        for start in range(1 << i, size, period):
            col |= block << start
        cols.append(col)
    return cols


def truth_columns(ast: BenchAst, fault: Fault | None = None) -> list[int]:
    """Exhaustive PO truth columns, optionally with a fault forced in.

    A stem fault forces the net's column everywhere downstream; a branch
    fault forces only the view of the named consumer pin.
    """
    n = len(ast.inputs)
    mask = (1 << (1 << n)) - 1
    forced = None
    if fault is not None:
        forced = mask if fault.stuck_at else 0
    col = dict(zip(ast.inputs, input_columns(n)))
    if fault is not None and fault.site.branch is None and fault.site.net in col:
        col[fault.site.net] = forced
    for target, kind, fanins in _topo_assignments(ast):
        ins = []
        for pin, f in enumerate(fanins):
            v = col[f]
            if (
                fault is not None
                and fault.site.branch == (target, pin)
                and fault.site.net == f
            ):
                v = forced
            ins.append(v)
        out = _OPS[kind](ins, mask)
        if fault is not None and fault.site.branch is None \
                and fault.site.net == target:
            out = forced
        col[target] = out
    return [col[o] for o in ast.outputs]


def brute_force_detectable(ast: BenchAst, fault: Fault) -> bool:
    """True iff some input pattern exposes the fault at a primary output."""
    return truth_columns(ast) != truth_columns(ast, fault)


def brute_force_redundant_set(ast: BenchAst, faults) -> set[Fault]:
    return {f for f in faults if not brute_force_detectable(ast, f)}


def detecting_pattern_indices(ast: BenchAst, fault: Fault) -> int:
    """Bitmask of exhaustive pattern indices that detect the fault."""
    good = truth_columns(ast)
    bad = truth_columns(ast, fault)
    m = 0
    for g, b in zip(good, bad):
        m |= g ^ b
    return m


def random_bench(seed: int, n_pi: int = 6, n_gates: int = 20, n_po: int = 2,
                 redundancy: bool = True) -> BenchAst:
    """Seeded random combinational netlist with optional redundant sites."""
    rng = Random(seed)
    inputs = [f"x{i}" for i in range(n_pi)]
    nets = list(inputs)
    assignments = []

    def fresh(base):
        return f"{base}{len(assignments)}"

    if redundancy and rng.random() < 0.8:
        a = rng.choice(nets)
        inv = fresh("n")
        assignments.append((inv, "NOT", (a,)))
        taut = fresh("t")
        assignments.append((taut, "OR", (a, inv)))
        nets += [inv, taut]

    kinds = ["AND", "OR", "NAND", "NOR", "XOR", "XNOR", "NOT", "BUF"]
    weights = [5, 5, 3, 3, 2, 2, 2, 1]
    while len(assignments) < n_gates:
        kind = rng.choices(kinds, weights)[0]
        arity = 1 if kind in ("NOT", "BUF") else rng.choice([2, 2, 2, 3])
        # bias toward recent nets for depth
        pool = nets[-10:] if rng.random() < 0.7 else nets
        fanins = tuple(rng.choice(pool) for _ in range(arity))
        name = fresh("g")
        assignments.append((name, kind, fanins))
        nets.append(name)

    gate_nets = [a[0] for a in assignments]
    outs = []
    for cand in reversed(gate_nets):
        if cand not in outs:
            outs.append(cand)
        if len(outs) == n_po:
            break
    return BenchAst(inputs, list(reversed(outs)), assignments)
