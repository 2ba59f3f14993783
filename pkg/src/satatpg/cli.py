"""Command-line front end: ``atpg``, ``faultsim``, and ``lock`` subcommands."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bench_io import BenchParseError, load_bench, save_bench
from .circuit import CircuitError, build_circuit, cut_dffs
from .driver import DriverConfig, approach1, approach2, compute_coverage
from .faults import FaultError, enumerate_faults, format_fault_list, parse_fault_list
from .faultsim import random_prepass, run_fault_sim
from .locking import lock_fault_group
from .report import format_patterns, format_report, parse_patterns, render_figures

USAGE_ERROR = 1
ABORT_ERROR = 2


def _load_circuit(path):
    ast = cut_dffs(load_bench(path))
    return build_circuit(ast)


def _select_faults(spec, circuit):
    if spec == "all":
        return enumerate_faults(circuit)
    with open(spec, "r", encoding="utf-8") as fh:
        return parse_fault_list(fh.read(), circuit)


def _write(path, text):
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _patterns_path(base: str, label: str, both: bool) -> str:
    if not both:
        return base
    p = Path(base)
    return str(p.with_name(f"{p.stem}.{label}{p.suffix or '.pat'}"))


def cmd_atpg(args) -> int:
    circuit = _load_circuit(args.bench)
    all_faults = enumerate_faults(circuit)
    target = _select_faults(args.faults, circuit)

    detected_pre, residual, _pre_patterns = random_prepass(
        circuit, target, args.prepass, seed=args.seed
    )

    cfg = DriverConfig(
        seed=args.seed,
        conflict_budget=args.conflict_budget,
        timeout=args.timeout,
        group_size=args.group_size,
        jobs=args.jobs,
        solver=args.solver,
        trace=sys.stderr if args.trace else None,
        dump_cnf=args.dump_cnf,
    )

    bench_name = os.path.basename(args.bench)
    sections = []
    aborted = 0
    if args.approach in ("1", "both"):
        res1 = approach1(circuit, residual, cfg)
        cov1 = compute_coverage(res1.verdicts, len(detected_pre), len(target))
        sections.append(("approach1", res1, cov1))
        aborted += cov1.aborted
    if args.approach in ("2", "both"):
        res2 = approach2(circuit, residual, cfg)
        cov2 = compute_coverage(res2.verdicts, len(detected_pre), len(target))
        sections.append(("approach2", res2, cov2))
        aborted += cov2.aborted

    if args.patterns:
        both = len(sections) > 1
        for label, res, _ in sections:
            path = _patterns_path(args.patterns, label, both)
            _write(path, format_patterns(res.patterns, circuit, bench_name, label))

    meta = {
        "seed": args.seed,
        "prepass_budget": args.prepass,
        "target_faults": len(target),
        "universe_faults": len(all_faults),
    }
    text = format_report(bench_name, circuit, sections, meta, with_times=args.times)
    _write(args.report, text)
    if args.report and args.report != "-" and not args.no_figures:
        render_figures(args.report, sections, bench_name)
    return ABORT_ERROR if aborted else 0


def cmd_faultsim(args) -> int:
    circuit = _load_circuit(args.bench)
    faults = _select_faults(args.faults, circuit)
    with open(args.patterns, "r", encoding="utf-8") as fh:
        patterns = parse_patterns(fh.read(), expected_width=circuit.num_pis)
    report = run_fault_sim(circuit, faults, patterns,
                           drop_detected=not args.no_drop)
    lines = [
        "# satatpg faultsim report",
        f"bench\t{os.path.basename(args.bench)}",
        f"fault_count\t{len(faults)}",
        f"pattern_count\t{len(patterns)}",
        f"detected\t{len(report.detected)}",
        f"undetected\t{len(report.undetected)}",
        "site\tpolarity\tstatus\tfirst_pattern",
    ]
    for f in faults:
        if f in report.detected_by:
            lines.append(
                f"{f.site}\tsa{f.stuck_at}\tdetected\t{report.detected_by[f]}"
            )
        else:
            lines.append(f"{f.site}\tsa{f.stuck_at}\tundetected\t-")
    _write(args.report, "\n".join(lines) + "\n")
    return 0


def cmd_lock(args) -> int:
    circuit = _load_circuit(args.bench)
    faults = _select_faults(args.faults, circuit)
    lc = lock_fault_group(circuit, faults)
    save_bench(lc.circuit.to_ast(), args.out)
    print("k_ref " + "".join(str(b) for b in lc.k_ref_vector))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="satatpg",
        description="Stuck-at test pattern generation via the SAT attack on "
                    "key-gate-locked circuits",
    )
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("atpg", help="run the full test generation pipeline")
    a.add_argument("--bench", required=True, help="combinational .bench netlist")
    a.add_argument("--approach", choices=["1", "2", "both"], default="both")
    a.add_argument("--faults", default="all",
                   help="'all' or a fault-list file (SITE sa0|sa1 per line)")
    a.add_argument("--prepass", type=int, default=1024, metavar="N",
                   help="random patterns simulated before the SAT stage")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--group-size", type=int, default=64, metavar="G")
    a.add_argument("--timeout", type=float, default=None, metavar="SECS",
                   help="wall-clock limit per attack")
    a.add_argument("--conflict-budget", type=int, default=None, metavar="N")
    a.add_argument("--solver", default="builtin",
                   help="'builtin' or 'extern:<command>' (DIMACS on a file)")
    a.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    a.add_argument("--patterns", default=None, metavar="OUT")
    a.add_argument("--report", default="-", metavar="OUT")
    a.add_argument("--dump-cnf", default=None, metavar="DIR")
    a.add_argument("--trace", action="store_true",
                   help="write per-iteration attack lines to stderr")
    a.add_argument("--times", action="store_true",
                   help="include wall times in the report (non-deterministic)")
    a.add_argument("--no-figures", action="store_true")
    a.set_defaults(func=cmd_atpg)

    f = sub.add_parser("faultsim", help="replay a pattern file against faults")
    f.add_argument("--bench", required=True)
    f.add_argument("--patterns", required=True)
    f.add_argument("--faults", default="all")
    f.add_argument("--report", default="-", metavar="OUT")
    f.add_argument("--no-drop", action="store_true",
                   help="disable fault dropping")
    f.set_defaults(func=cmd_faultsim)

    l = sub.add_parser("lock", help="emit the key-gate-locked bench for faults")
    l.add_argument("--bench", required=True)
    l.add_argument("--faults", required=True,
                   help="fault-list file, or 'all'")
    l.add_argument("--out", required=True)
    l.set_defaults(func=cmd_lock)

    dump = sub.add_parser("faults", help="print the enumerated fault universe")
    dump.add_argument("--bench", required=True)
    dump.set_defaults(func=lambda args: (
        sys.stdout.write(format_fault_list(
            enumerate_faults(_load_circuit(args.bench)))), 0)[1])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (BenchParseError, CircuitError, FaultError, FileNotFoundError,
            ValueError) as e:
        print(f"satatpg: error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
