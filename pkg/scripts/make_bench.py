#!/usr/bin/env python3
"""Generate the bundled synthetic benchmark netlists.

Produces mid-size combinational .bench files laid out in wide, shallow
levels so faults stay observable: mostly random logic that a short
random-pattern pre-pass covers, a few wide-AND "hard" cones that random
patterns almost never activate (so the SAT stage has real work), and a
few tautology-guarded redundant sites.  Every net is consumed by the
next level or folded into the outputs through an XOR-weighted collector.

Usage: python3 scripts/make_bench.py OUT.bench --seed N [--gates G] [--pis P]
"""

import argparse
import sys
from pathlib import Path
from random import Random

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from satatpg.bench_io import BenchAst, write_bench  # noqa: E402

# AND/OR dominated like production netlists; heavy XOR content makes the
# attack's final UNSAT proofs needlessly hard for CDCL
KINDS = ["AND", "OR", "NAND", "NOR", "XOR", "XNOR", "NOT", "BUF"]
WEIGHTS = [5, 5, 3, 3, 2, 1, 2, 1]


def make_bench(seed: int, n_pi: int = 32, n_gates: int = 600, n_po: int = 16,
               n_hard: int = 4, n_redundant: int = 3,
               hard_width: int = 12, depth: int = 8) -> BenchAst:
    rng = Random(seed)
    inputs = [f"x{i}" for i in range(n_pi)]
    nets = list(inputs)
    assignments = []
    prob = {x: 0.5 for x in inputs}  # independence-model signal probability

    def estimate(kind, fanins):
        ps = [prob[f] for f in fanins]
        if kind in ("AND", "NAND"):
            p = 1.0
            for q in ps:
                p *= q
        elif kind in ("OR", "NOR"):
            p = 1.0
            for q in ps:
                p *= 1.0 - q
            p = 1.0 - p
        elif kind in ("XOR", "XNOR"):
            p = ps[0]
            for q in ps[1:]:
                p = p * (1.0 - q) + q * (1.0 - p)
        else:  # NOT, BUF
            p = ps[0]
        if kind in ("NAND", "NOR", "XNOR", "NOT"):
            p = 1.0 - p
        return p

    def add(kind, fanins, p=None):
        name = f"g{len(assignments)}"
        assignments.append((name, kind, tuple(fanins)))
        nets.append(name)
        prob[name] = estimate(kind, fanins) if p is None else p
        return name

    def pick_others(count, prev, exclude):
        chosen = []
        for _ in range(count):
            pool = prev if rng.random() < 0.8 else nets
            cand = [x for x in pool if x not in exclude and x not in chosen]
            if not cand:
                cand = [x for x in nets if x not in exclude and x not in chosen]
            chosen.append(rng.choice(cand))
        return chosen

    hard_levels = sorted(rng.randrange(depth) for _ in range(n_hard))
    red_levels = sorted(rng.randrange(depth) for _ in range(n_redundant))
    per_level = max(4, n_gates // depth)

    prev = list(inputs)
    for level in range(depth):
        cur = []
        todo = list(prev)
        rng.shuffle(todo)

        # Redundant sites: t = OR(a, NOT a) is constant 1, so faults that
        # try to force t (or the inverter output) to 1 are unexposable.
        for _ in range(red_levels.count(level)):
            a = todo.pop() if todo else rng.choice(prev)
            inv = add("NOT", [a])
            taut = add("OR", [a, inv])
            cur.append(add("AND", [taut, rng.choice(prev)]))

        # Hard cones: a wide AND over distinct PIs is 1 with probability
        # 2^-hard_width per random pattern, so its faults survive the
        # pre-pass but fall to the SAT stage immediately.
        for _ in range(hard_levels.count(level)):
            wide = add("AND", rng.sample(inputs, hard_width))
            cur.append(add("XOR", [wide, todo.pop() if todo else rng.choice(prev)]))

        while len(cur) < per_level or todo:
            first = todo.pop() if todo else rng.choice(prev)
            # redraw skewed gates: drifting signal probabilities make nets
            # unobservable and breed redundant faults
            for _ in range(10):
                kind = rng.choices(KINDS, WEIGHTS)[0]
                arity = 1 if kind in ("NOT", "BUF") else rng.choice([2, 2, 2, 3])
                fanins = [first] + pick_others(arity - 1, prev, {first})
                if 0.15 <= estimate(kind, fanins) <= 0.85:
                    break
            cur.append(add(kind, fanins))
        prev = cur

    # Collector: fold the final level down to the output count, XOR-heavy
    # so upstream differences keep propagating.
    fold_kinds = ["XOR", "OR", "AND", "XNOR", "NAND", "NOR"]
    fold_weights = [3, 3, 3, 1, 1, 1]
    rng.shuffle(prev)
    while len(prev) > n_po:
        a, b = prev.pop(), prev.pop()
        for _ in range(10):
            kind = rng.choices(fold_kinds, fold_weights)[0]
            if 0.15 <= estimate(kind, [a, b]) <= 0.85:
                break
        prev.append(add(kind, [a, b]))
    return BenchAst(inputs, prev, assignments)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("out")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--pis", type=int, default=32)
    p.add_argument("--gates", type=int, default=600)
    p.add_argument("--pos", type=int, default=16)
    p.add_argument("--hard", type=int, default=4)
    p.add_argument("--redundant", type=int, default=3)
    p.add_argument("--hard-width", type=int, default=12)
    p.add_argument("--depth", type=int, default=8)
    args = p.parse_args()
    ast = make_bench(args.seed, args.pis, args.gates, args.pos,
                     args.hard, args.redundant, args.hard_width, args.depth)
    Path(args.out).write_text(write_bench(ast), encoding="utf-8")
    print(f"{args.out}: {len(ast.inputs)} PIs, {len(ast.assignments)} gates, "
          f"{len(ast.outputs)} POs")


if __name__ == "__main__":
    main()
