"""Stuck-at fault simulation with word-packed patterns and fault dropping.

Fault injection reuses the locking transform: the faulty machine is the
locked circuit with the key pinned to the value that forces the modeled
stuck value (0 for an sa0 AND gate, 1 for an sa1 OR gate).  This keeps a
single code path for faulty semantics and exercises the wrong-key/fault
equivalence the whole flow rests on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random

from .circuit import Circuit, pack_patterns, simulate, simulate_packed
from .faults import Fault
from .locking import lock_fault

WORD = 64


@dataclass
class FaultSimReport:
    faults: list[Fault]
    patterns: list[tuple[int, ...]]
    # fault -> index of the first detecting pattern
    detected_by: dict[Fault, int] = field(default_factory=dict)

    @property
    def detected(self) -> list[Fault]:
        return [f for f in self.faults if f in self.detected_by]

    @property
    def undetected(self) -> list[Fault]:
        return [f for f in self.faults if f not in self.detected_by]

    def newly_detected_per_pattern(self) -> list[list[Fault]]:
        out: list[list[Fault]] = [[] for _ in self.patterns]
        for f in self.faults:
            if f in self.detected_by:
                out[self.detected_by[f]].append(f)
        return out


def faulty_circuit_view(c: Circuit, f: Fault):
    """Locked circuit plus the key value that hard-wires the fault."""
    lc = lock_fault(c, f)
    return lc, lc.key_map[0].k_fault


def simulate_fault(c: Circuit, f: Fault, pattern) -> tuple[int, ...]:
    """Outputs of the faulty machine for one pattern."""
    lc, k_fault = faulty_circuit_view(c, f)
    return simulate(lc.circuit, tuple(pattern) + (k_fault,))


def run_fault_sim(c: Circuit, faults, patterns, drop_detected: bool = True
                  ) -> FaultSimReport:
    """Mark each fault with the first pattern whose faulty response differs.

    With ``drop_detected`` (the default) a fault leaves the active set at
    first detection; without it, the first-detection index is identical,
    so diagnostic reports may simply disable dropping at no semantic cost.
    """
    faults = list(faults)
    patterns = [tuple(p) for p in patterns]
    report = FaultSimReport(faults, patterns)
    if not patterns:
        return report

    batches = []
    for base in range(0, len(patterns), WORD):
        chunk = patterns[base:base + WORD]
        packed, width = pack_patterns(chunk, c.num_pis)
        good = simulate_packed(c, packed, width)
        batches.append((base, packed, width, good))

    for f in faults:
        lc, k_fault = faulty_circuit_view(c, f)
        mask_needed = k_fault == 1
        first = None
        for base, packed, width, good in batches:
            key_word = (1 << width) - 1 if mask_needed else 0
            bad = simulate_packed(lc.circuit, packed + [key_word], width)
            diff = 0
            for g, b in zip(good, bad):
                diff |= g ^ b
            if diff:
                first = base + (diff & -diff).bit_length() - 1
                break
        if first is not None:
            report.detected_by[f] = first
    return report


def random_patterns(num_pis: int, count: int, seed: int = 0
                    ) -> list[tuple[int, ...]]:
    rng = Random(seed)
    return [
        tuple((rng.getrandbits(1)) for _ in range(num_pis)) for _ in range(count)
    ]


def random_prepass(c: Circuit, faults, budget: int, seed: int = 0):
    """Random-pattern pre-pass: detect the easy faults, keep the residue.

    Returns ``(detected set, residual fault list, patterns used)``.  The
    residual list plays the role of the undetected list a conventional
    ATPG front end would report.
    """
    faults = list(faults)
    if budget <= 0:
        return set(), faults, []
    patterns = random_patterns(c.num_pis, budget, seed)
    report = run_fault_sim(c, faults, patterns, drop_detected=True)
    detected = set(report.detected_by)
    residual = [f for f in faults if f not in detected]
    return detected, residual, patterns
