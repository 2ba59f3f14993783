import pytest

from satatpg.circuit import build_circuit, simulate
from satatpg.driver import (
    DETECTED,
    FAULT_SIM_RESIDUE,
    FIRST_QUERY_UNSAT,
    REDUNDANT,
    DriverConfig,
    Verdict,
    approach1,
    approach2,
    compute_coverage,
)
from satatpg.faults import Fault, FaultSite, enumerate_faults
from satatpg.faultsim import simulate_fault
from tests.util import brute_force_redundant_set, random_bench


def _corpus(n=6):
    out = []
    for seed in range(n):
        ast = random_bench(seed, n_pi=7, n_gates=25, n_po=3)
        out.append((seed, ast, build_circuit(ast)))
    return out


def test_partitions_match_brute_force_oracle():
    for seed, ast, c in _corpus():
        faults = enumerate_faults(c)
        red = brute_force_redundant_set(ast, faults)
        for approach in (approach1, approach2):
            r = approach(c, faults, DriverConfig(group_size=8))
            assert not r.aborted, (seed, approach.__name__)
            assert set(r.redundant) == red, (seed, approach.__name__)
            assert set(r.detected) == set(faults) - red


def test_detected_patterns_actually_detect():
    for seed, ast, c in _corpus(3):
        faults = enumerate_faults(c)
        for approach in (approach1, approach2):
            r = approach(c, faults, DriverConfig(group_size=8))
            for v in r.verdicts:
                if v.outcome != DETECTED:
                    continue
                pattern = r.patterns[v.pattern_index]
                assert simulate_fault(c, v.fault, pattern) \
                    != simulate(c, pattern), (seed, v.fault)


def test_group_size_one_equals_approach1_partition(small_circuit):
    faults = enumerate_faults(small_circuit)
    r1 = approach1(small_circuit, faults)
    r2 = approach2(small_circuit, faults, DriverConfig(group_size=1))
    assert r1.redundant == r2.redundant
    assert r1.detected == r2.detected
    assert len(r1.patterns) == len(r2.patterns)


def test_grouping_reduces_pattern_count():
    reductions = 0
    for seed, ast, c in _corpus():
        faults = enumerate_faults(c)
        r1 = approach1(c, faults)
        r2 = approach2(c, faults, DriverConfig(group_size=8))
        assert len(r2.patterns) <= len(r1.patterns), seed
        if len(r2.patterns) < len(r1.patterns):
            reductions += 1
    assert reductions >= 3


def test_redundant_evidence_kinds(tautology_circuit):
    fault = Fault(FaultSite("t"), 1)
    r1 = approach1(tautology_circuit, [fault])
    assert r1.verdicts[0].outcome == REDUNDANT
    assert r1.verdicts[0].evidence == FIRST_QUERY_UNSAT
    assert r1.verdicts[0].iterations == 1

    # in a group with a detectable fault, the redundancy shows up as
    # fault-sim residue under the solved key instead
    other = Fault(FaultSite("b"), 0)
    r2 = approach2(tautology_circuit, [fault, other],
                   DriverConfig(group_size=2))
    by_fault = {v.fault: v for v in r2.verdicts}
    assert by_fault[fault].evidence == FAULT_SIM_RESIDUE
    assert by_fault[other].outcome == DETECTED


def test_aborted_fallback_rebases_pattern_indices():
    ast = random_bench(2, n_pi=7, n_gates=25, n_po=3)
    c = build_circuit(ast)
    faults = enumerate_faults(c)
    # a tiny budget forces the grouped attack to abort; the driver retries
    # fault-by-fault with a doubled budget
    r = approach2(c, faults, DriverConfig(group_size=16, conflict_budget=3))
    for v in r.verdicts:
        if v.outcome == DETECTED:
            pattern = r.patterns[v.pattern_index]
            assert simulate_fault(c, v.fault, pattern) != simulate(c, pattern)


def test_zero_faults():
    ast = random_bench(0, n_pi=5, n_gates=10, n_po=2)
    c = build_circuit(ast)
    for approach in (approach1, approach2):
        r = approach(c, [])
        assert r.verdicts == [] and r.patterns == []


def test_jobs_parallel_matches_serial():
    ast = random_bench(4, n_pi=7, n_gates=25, n_po=3)
    c = build_circuit(ast)
    faults = enumerate_faults(c)
    serial = approach1(c, faults, DriverConfig(jobs=1))
    parallel = approach1(c, faults, DriverConfig(jobs=4))
    assert serial.redundant == parallel.redundant
    assert serial.detected == parallel.detected
    assert serial.patterns == parallel.patterns


def test_compute_coverage_accounting():
    f0 = Fault(FaultSite("a"), 0)
    f1 = Fault(FaultSite("a"), 1)
    verdicts = [Verdict(f0, DETECTED, pattern_index=0),
                Verdict(f1, REDUNDANT, FIRST_QUERY_UNSAT)]
    rep = compute_coverage(verdicts, prepass_detected=8, total_faults=10)
    assert rep.detected_sat == 1 and rep.redundant == 1 and rep.aborted == 0
    assert rep.coverage_pct == 100.0

    with pytest.raises(ValueError, match="accounting mismatch"):
        compute_coverage(verdicts, prepass_detected=8, total_faults=11)
    with pytest.raises(ValueError, match="more than one verdict"):
        compute_coverage([verdicts[0], verdicts[0]], 8, 10)


def test_coverage_empty_universe():
    assert compute_coverage([], 0, 0).coverage_pct == 100.0
