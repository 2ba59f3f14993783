"""SAT-attack-based stuck-at test pattern generation."""

from .bench_io import BenchAst, BenchParseError, parse_bench, write_bench
from .circuit import (
    Circuit,
    CircuitError,
    build_circuit,
    cut_dffs,
    simulate,
    simulate_packed,
)
from .faults import Fault, FaultSite, enumerate_faults, insert_branch_buffer
from .locking import LockedCircuit, lock_fault, lock_fault_group
from .cnf import CnfFormula, encode_instance
from .solver import CdclSolver, ExternalDimacsSolver, Sat, Unsat, solve
from .attack import AttackConfig, AttackResult, build_miter, run_attack
from .faultsim import random_prepass, run_fault_sim, simulate_fault
from .driver import (
    CoverageReport,
    DriverConfig,
    Verdict,
    approach1,
    approach2,
    compute_coverage,
)

__version__ = "0.1.0"

__all__ = [
    "BenchAst",
    "BenchParseError",
    "parse_bench",
    "write_bench",
    "Circuit",
    "CircuitError",
    "build_circuit",
    "cut_dffs",
    "simulate",
    "simulate_packed",
    "Fault",
    "FaultSite",
    "enumerate_faults",
    "insert_branch_buffer",
    "LockedCircuit",
    "lock_fault",
    "lock_fault_group",
    "CnfFormula",
    "encode_instance",
    "CdclSolver",
    "ExternalDimacsSolver",
    "Sat",
    "Unsat",
    "solve",
    "AttackConfig",
    "AttackResult",
    "build_miter",
    "run_attack",
    "random_prepass",
    "run_fault_sim",
    "simulate_fault",
    "CoverageReport",
    "DriverConfig",
    "Verdict",
    "approach1",
    "approach2",
    "compute_coverage",
]
