"""Solve a DIMACS CNF file with the built-in solver.

Usage: ``python -m satatpg.dimacs_solve file.cnf``.  Prints SAT-competition
style output, so the module itself can serve as an external-solver command
for the ``extern:`` backend (useful for testing the adapter).
"""

from __future__ import annotations

import sys

from .cnf import parse_dimacs
from .solver import solve


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m satatpg.dimacs_solve FILE.cnf", file=sys.stderr)
        return 1
    with open(argv[0], "r", encoding="utf-8") as fh:
        formula = parse_dimacs(fh.read())
    verdict = solve(formula)
    if verdict:
        print("s SATISFIABLE")
        lits = [v if verdict.model[v] else -v for v in range(1, formula.num_vars + 1)]
        print("v " + " ".join(map(str, lits)) + " 0")
        return 10
    print("s UNSATISFIABLE")
    return 20


if __name__ == "__main__":
    sys.exit(main())
