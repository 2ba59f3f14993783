"""End-to-end test generation: per-fault and grouped attacks plus coverage.

Approach 1 locks one fault at a time; a first-query UNSAT is a redundancy
proof, a solved attack yields one pattern and must agree with the
reference key.  Approach 2 locks a whole group, collects the DIPs, and
lets fault simulation split the group into detected and redundant.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .attack import ABORTED, NO_DIP, SOLVED, AttackConfig, run_attack
from .circuit import Circuit
from .faults import Fault
from .faultsim import run_fault_sim
from .locking import lock_fault, lock_fault_group

DETECTED = "detected"
REDUNDANT = "redundant"
# redundancy evidence
FIRST_QUERY_UNSAT = "first_query_unsat"
FAULT_SIM_RESIDUE = "fault_sim_residue_with_solved_key"


class KeyMismatchError(AssertionError):
    """A solved attack contradicts the reference key.

    For a single-key attack with a DIP the surviving key is exactly
    k_ref, so any other bit means the locking transform or the solver is
    broken and is surfaced as a hard error, never as a verdict.  For
    grouped attacks the recovered key may differ from k_ref on pairs of
    mutually masking faults; the per-bit law asserted there is that
    flipping one detected bit away from k_ref breaks agreement with the
    oracle on that fault's detecting pattern.
    """


@dataclass
class Verdict:
    fault: Fault
    outcome: str  # detected | redundant | aborted
    evidence: str | None = None  # for redundant verdicts
    pattern_index: int | None = None  # index into the approach's pattern set
    iterations: int = 0
    wall_time: float = 0.0


@dataclass
class DriverConfig:
    seed: int = 0
    conflict_budget: int | None = None
    timeout: float | None = None  # per attack, seconds
    group_size: int = 64
    jobs: int = 1
    solver: str = "builtin"
    trace: object = None
    dump_cnf: str | None = None

    def attack_config(self, budget_scale: int = 1) -> AttackConfig:
        budget = self.conflict_budget
        if budget is not None:
            budget *= budget_scale
        timeout = self.timeout
        if timeout is not None:
            timeout *= budget_scale
        return AttackConfig(
            seed=self.seed,
            conflict_budget=budget,
            timeout=timeout,
            solver=self.solver,
            trace=self.trace,
            dump_cnf=self.dump_cnf,
        )


@dataclass
class ApproachResult:
    redundant: list[Fault]
    detected: list[Fault]
    patterns: list[tuple[int, ...]]
    verdicts: list[Verdict]

    @property
    def aborted(self) -> list[Fault]:
        return [v.fault for v in self.verdicts if v.outcome == ABORTED]


def _check_key_bit(fault: Fault, bit: int, k_ref: int) -> None:
    if bit != k_ref:
        raise KeyMismatchError(
            f"fault {fault}: solved key bit {bit} != reference {k_ref}; "
            f"locking transform or solver is broken"
        )


def _check_group_key_bit(c: Circuit, lc, fault: Fault, index: int,
                         dip, oracle_out=None) -> None:
    """Single-bit flip from k_ref must disagree with the oracle on ``dip``."""
    from .circuit import simulate

    key = [kb.k_ref for kb in lc.key_map]
    key[index] = 1 - key[index]
    got = simulate(lc.circuit, lc.key_assignment(dip, key))
    want = oracle_out if oracle_out is not None else simulate(c, dip)
    if got == want:
        raise KeyMismatchError(
            f"fault {fault}: flipping key bit {index} from k_ref does not "
            f"disturb its detecting pattern; locking transform is broken"
        )


def _attack_one(c: Circuit, fault: Fault, cfg: DriverConfig):
    lc = lock_fault(c, fault)
    start = time.monotonic()
    result = run_attack(lc, c, cfg.attack_config())
    if result.status == ABORTED:
        # one retry with doubled budget before reporting
        result = run_attack(lc, c, cfg.attack_config(budget_scale=2))
    return fault, lc, result, time.monotonic() - start


def approach1(c: Circuit, faults, cfg: DriverConfig | None = None) -> ApproachResult:
    """One 1-key attack per fault; |patterns| equals |detected|."""
    cfg = cfg or DriverConfig()
    faults = list(faults)
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            runs = list(pool.map(lambda f: _attack_one(c, f, cfg), faults))
    else:
        runs = [_attack_one(c, f, cfg) for f in faults]

    res = ApproachResult([], [], [], [])
    for fault, lc, result, elapsed in runs:
        if result.status == NO_DIP:
            res.redundant.append(fault)
            res.verdicts.append(Verdict(fault, REDUNDANT, FIRST_QUERY_UNSAT,
                                        iterations=result.iterations,
                                        wall_time=elapsed))
        elif result.status == SOLVED:
            _check_key_bit(fault, result.key[0], lc.key_map[0].k_ref)
            res.detected.append(fault)
            res.patterns.append(result.dips[0])
            res.verdicts.append(Verdict(fault, DETECTED,
                                        pattern_index=len(res.patterns) - 1,
                                        iterations=result.iterations,
                                        wall_time=elapsed))
        else:
            res.verdicts.append(Verdict(fault, ABORTED, iterations=result.iterations,
                                        wall_time=elapsed))
    return res


def _attack_group(c: Circuit, group: list[Fault], cfg: DriverConfig):
    lc = lock_fault_group(c, group)
    start = time.monotonic()
    result = run_attack(lc, c, cfg.attack_config())
    return lc, result, time.monotonic() - start


def approach2(c: Circuit, faults, cfg: DriverConfig | None = None) -> ApproachResult:
    """Grouped multi-key attacks; fault simulation splits each group."""
    cfg = cfg or DriverConfig()
    faults = list(faults)
    if not faults:
        return ApproachResult([], [], [], [])
    g = max(1, cfg.group_size)
    groups = [faults[i:i + g] for i in range(0, len(faults), g)]

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            runs = list(pool.map(lambda grp: _attack_group(c, grp, cfg), groups))
    else:
        runs = [_attack_group(c, grp, cfg) for grp in groups]

    res = ApproachResult([], [], [], [])
    for group, (lc, result, elapsed) in zip(groups, runs):
        per_fault = elapsed / len(group)
        if result.status == NO_DIP:
            for f in group:
                res.redundant.append(f)
                res.verdicts.append(Verdict(f, REDUNDANT, FIRST_QUERY_UNSAT,
                                            iterations=result.iterations,
                                            wall_time=per_fault))
            continue
        if result.status == ABORTED:
            # rerun fault-by-fault with doubled budget (Approach-1 fallback)
            retry_cfg = replace(cfg, conflict_budget=(
                None if cfg.conflict_budget is None else cfg.conflict_budget * 2
            ))
            sub = approach1(c, group, retry_cfg)
            base = len(res.patterns)
            res.patterns.extend(sub.patterns)
            res.redundant.extend(sub.redundant)
            res.detected.extend(sub.detected)
            for v in sub.verdicts:
                if v.pattern_index is not None:
                    v.pattern_index += base
                res.verdicts.append(v)
            continue

        sim = run_fault_sim(c, group, result.dips, drop_detected=True)
        # keep only DIPs that newly detect something; a DIP can prune keys
        # without detecting any group fault, and such patterns are dead
        # weight in the emitted test set
        buckets = sim.newly_detected_per_pattern()
        keep = [i for i, bucket in enumerate(buckets) if bucket]
        remap = {old: new for new, old in enumerate(keep)}
        base = len(res.patterns)
        res.patterns.extend(result.dips[i] for i in keep)
        for i, f in enumerate(group):
            if f in sim.detected_by:
                _check_group_key_bit(c, lc, f, i, result.dips[sim.detected_by[f]])
                res.detected.append(f)
                res.verdicts.append(Verdict(
                    f, DETECTED,
                    pattern_index=base + remap[sim.detected_by[f]],
                    iterations=result.iterations, wall_time=per_fault))
            else:
                res.redundant.append(f)
                res.verdicts.append(Verdict(
                    f, REDUNDANT, FAULT_SIM_RESIDUE,
                    iterations=result.iterations, wall_time=per_fault))
    return res


@dataclass
class CoverageReport:
    total_faults: int
    prepass_detected: int
    detected_sat: int  # DF: hard-to-detect faults the attack found patterns for
    redundant: int  # RF: proven-redundant faults
    aborted: int

    @property
    def coverage_pct(self) -> float:
        if self.total_faults == 0:
            return 100.0
        return (self.prepass_detected + self.detected_sat + self.redundant) \
            / self.total_faults * 100.0


def compute_coverage(verdicts: list[Verdict], prepass_detected: int,
                     total_faults: int) -> CoverageReport:
    """Totals over one approach's verdicts plus the pre-pass detections."""
    counted = prepass_detected + len(verdicts)
    if counted != total_faults:
        raise ValueError(
            f"fault accounting mismatch: {prepass_detected} prepass + "
            f"{len(verdicts)} verdicts != {total_faults} total"
        )
    seen = set()
    for v in verdicts:
        if v.fault in seen:
            raise ValueError(f"fault {v.fault} has more than one verdict")
        seen.add(v.fault)
    df = sum(1 for v in verdicts if v.outcome == DETECTED)
    rf = sum(1 for v in verdicts if v.outcome == REDUNDANT)
    ab = sum(1 for v in verdicts if v.outcome == ABORTED)
    return CoverageReport(total_faults, prepass_detected, df, rf, ab)
