"""Fault-to-key-gate locking transform.

A stuck-at-0 fault becomes an AND key gate (transparent for k=1) and a
stuck-at-1 fault an OR key gate (transparent for k=0) spliced at the
fault site.  With every key at its reference value the locked circuit is
input-equivalent to the original; flipping bit i reproduces exactly the
machine with fault i injected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bench_io import BenchAst
from .circuit import Circuit, build_circuit
from .faults import Fault, FaultError, insert_branch_buffer_ast, validate_fault

KEY_PREFIX = "keyinput"


@dataclass(frozen=True)
class KeyBit:
    index: int
    fault: Fault
    k_ref: int  # transparent key value: 1 for sa0/AND, 0 for sa1/OR

    @property
    def k_fault(self) -> int:
        """Key value that forces the modeled stuck value."""
        return 1 - self.k_ref


@dataclass
class LockedCircuit:
    circuit: Circuit
    key_map: list[KeyBit]
    functional_pi_count: int

    @property
    def num_keys(self) -> int:
        return len(self.key_map)

    @property
    def k_ref_vector(self) -> tuple[int, ...]:
        return tuple(kb.k_ref for kb in self.key_map)

    def key_assignment(self, pattern, key_bits) -> tuple[int, ...]:
        """Concatenate a functional input pattern with key bit values."""
        if len(pattern) != self.functional_pi_count:
            raise ValueError(
                f"pattern width {len(pattern)} != functional PI count "
                f"{self.functional_pi_count}"
            )
        if len(key_bits) != self.num_keys:
            raise ValueError(
                f"key width {len(key_bits)} != key count {self.num_keys}"
            )
        return tuple(pattern) + tuple(key_bits)


def _splice_key_gate(ast: BenchAst, site_net: str, kind: str, key_net: str,
                     out_net: str) -> BenchAst:
    """Reroute every reader of ``site_net`` through ``out_net = kind(site, k)``."""
    assignments = []
    for target, gkind, fanins in ast.assignments:
        fanins = tuple(out_net if f == site_net else f for f in fanins)
        assignments.append((target, gkind, fanins))
    assignments.append((out_net, kind, (site_net, key_net)))
    outputs = [out_net if o == site_net else o for o in ast.outputs]
    return BenchAst(list(ast.inputs), outputs, assignments, list(ast.comments))


def lock_fault_group(c: Circuit, faults) -> LockedCircuit:
    """Lock one key gate per fault, in list order of ``faults``.

    Branch sites get one shared renaming buffer.  When both polarities
    target the same site the two key gates chain in series with the AND
    nearer the stem.  Key input i (named ``keyinput<i>``) always maps to
    ``faults[i]``.
    """
    faults = list(faults)
    if not faults:
        raise FaultError("empty fault group")
    seen = set()
    for f in faults:
        validate_fault(c, f)
        if f in seen:
            raise FaultError(f"duplicate fault in group: {f}")
        seen.add(f)

    ast = c.to_ast()
    taken = set(ast.inputs) | {t for t, _, _ in ast.assignments}
    for i in range(len(faults)):
        key_net = f"{KEY_PREFIX}{i}"
        if key_net in taken:
            raise FaultError(f"net name {key_net!r} already used by the circuit")

    # one buffer per distinct branch site
    site_net: dict = {}
    for f in faults:
        if f.site.branch is not None and f.site not in site_net:
            ast, buf = insert_branch_buffer_ast(ast, f.site)
            site_net[f.site] = buf
        elif f.site.branch is None:
            site_net[f.site] = f.site.net

    # per resolved net: sa0 (AND) spliced first, then sa1 (OR)
    by_net: dict[str, list[int]] = {}
    for i, f in enumerate(faults):
        by_net.setdefault(site_net[f.site], []).append(i)
    for net, idxs in by_net.items():
        idxs.sort(key=lambda i: faults[i].stuck_at)
        tail = net
        for i in idxs:
            f = faults[i]
            kind = "AND" if f.stuck_at == 0 else "OR"
            taken_now = set(ast.inputs) | {t for t, _, _ in ast.assignments}
            out = f"{tail}_k{i}"
            n = 1
            while out in taken_now:
                out = f"{tail}_k{i}_{n}"
                n += 1
            ast = _splice_key_gate(ast, tail, kind, f"{KEY_PREFIX}{i}", out)
            tail = out

    ast.inputs.extend(f"{KEY_PREFIX}{i}" for i in range(len(faults)))
    key_map = [
        KeyBit(i, f, 1 if f.stuck_at == 0 else 0) for i, f in enumerate(faults)
    ]
    return LockedCircuit(build_circuit(ast), key_map, c.num_pis)


def lock_fault(c: Circuit, f: Fault) -> LockedCircuit:
    """Single-fault locking: one key gate, one key bit."""
    return lock_fault_group(c, [f])
