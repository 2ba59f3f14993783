"""CNF formulas, Tseitin encoding of circuits, and DIMACS emission.

Literals are nonzero signed ints, DIMACS style: variable v is ``v``
(positive) or ``-v``.  Variables are allocated from 1 upward.
"""

from __future__ import annotations

from .circuit import Circuit


class CnfError(ValueError):
    pass


class CnfFormula:
    """Growing clause database with a fresh-variable allocator."""

    __slots__ = ("num_vars", "clauses")

    def __init__(self):
        self.num_vars = 0
        self.clauses: list[list[int]] = []

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def new_vars(self, n: int) -> list[int]:
        return [self.new_var() for _ in range(n)]

    def add_clause(self, lits) -> None:
        lits = list(lits)
        if not lits:
            raise CnfError("empty clause; formula is trivially unsatisfiable")
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise CnfError(f"literal {lit} out of range (num_vars={self.num_vars})")
        self.clauses.append(lits)

    def add_clauses(self, clauses) -> None:
        for cl in clauses:
            self.add_clause(cl)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, cl)) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"

    def copy(self) -> "CnfFormula":
        f = CnfFormula()
        f.num_vars = self.num_vars
        f.clauses = [list(cl) for cl in self.clauses]
        return f


def parse_dimacs(text: str) -> CnfFormula:
    f = CnfFormula()
    declared = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"bad DIMACS header: {line!r}")
            declared = int(parts[2])
            f.num_vars = declared
            continue
        lits = [int(t) for t in line.split()]
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        if not lits:
            continue
        top = max(abs(l) for l in lits)
        if top > f.num_vars:
            f.num_vars = top
        f.clauses.append(lits)
    return f


def _gate_clauses(kind: str, out: int, ins: list[int], formula: CnfFormula):
    """Standard Tseitin clauses for one gate; XOR chains fold via fresh vars."""
    if kind in ("AND", "NAND"):
        o = out if kind == "AND" else -out
        for i in ins:
            yield [-o, i]
        yield [o] + [-i for i in ins]
    elif kind in ("OR", "NOR"):
        o = out if kind == "OR" else -out
        for i in ins:
            yield [o, -i]
        yield [-o] + list(ins)
    elif kind in ("XOR", "XNOR"):
        acc = ins[0]
        rest = ins[1:]
        for j, b in enumerate(rest):
            last = j == len(rest) - 1
            x = out if last else formula.new_var()
            if last and kind == "XNOR":
                yield [-x, -acc, b]
                yield [-x, acc, -b]
                yield [x, -acc, -b]
                yield [x, acc, b]
            else:
                yield [-x, acc, b]
                yield [-x, -acc, -b]
                yield [x, -acc, b]
                yield [x, acc, -b]
            acc = x
    elif kind == "NOT":
        yield [-out, -ins[0]]
        yield [out, ins[0]]
    elif kind == "BUF":
        yield [-out, ins[0]]
        yield [out, -ins[0]]
    else:
        raise CnfError(f"cannot encode gate kind {kind!r}")


def encode_instance(c: Circuit, formula: CnfFormula,
                    shared: dict[int, int] | None = None) -> list[int]:
    """Tseitin-encode one instance of ``c`` into ``formula``.

    ``shared`` maps net index -> existing variable, letting instances
    share inputs or key nets.  Returns the net-index -> variable map.
    """
    shared = shared or {}
    varmap = [0] * len(c.net_names)
    for net in range(len(c.net_names)):
        varmap[net] = shared.get(net) or formula.new_var()
    for g in c.gates:
        ins = [varmap[f] for f in g.fanins]
        formula.add_clauses(_gate_clauses(g.kind, varmap[g.output], ins, formula))
    return varmap


def check_model(formula: CnfFormula, model) -> bool:
    """True iff ``model`` (index-by-variable truth list) satisfies every clause."""
    return all(
        any((lit > 0) == model[abs(lit)] for lit in cl) for cl in formula.clauses
    )
