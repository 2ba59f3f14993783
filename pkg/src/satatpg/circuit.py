"""Immutable combinational circuit graph with topological evaluation.

A :class:`Circuit` is the in-memory form of a DFF-free bench netlist.  It
doubles as the simulation oracle: :func:`simulate` gives exact two-valued
evaluation, :func:`simulate_packed` evaluates many patterns at once with
bitwise word operations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bench_io import BenchAst


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    fanins: tuple[int, ...]  # net indices
    output: int  # net index


class Circuit:
    """Gate graph over indexed nets; immutable after construction.

    Net indices: primary inputs first (in declaration order), then gate
    output nets in assignment order.  ``fanout[n]`` lists the
    ``(gate index, pin)`` pairs reading net ``n``; a PO does not count as
    a fanout consumer.
    """

    __slots__ = (
        "net_names",
        "net_index",
        "pi_order",
        "po_order",
        "gates",
        "driver_of",
        "fanout",
        "topo_gates",
        "topo_nets",
    )

    def __init__(self, ast: BenchAst):
        for target, kind, _ in ast.assignments:
            if kind == "DFF":
                raise CircuitError(
                    f"net {target!r} is driven by a DFF; apply cut_dffs first"
                )

        names = list(ast.inputs) + [t for t, _, _ in ast.assignments]
        index = {n: i for i, n in enumerate(names)}
        self.net_names = names
        self.net_index = index
        self.pi_order = [index[n] for n in ast.inputs]
        for n in ast.outputs:
            if n not in index:
                raise CircuitError(f"dangling output {n!r}")
        self.po_order = [index[n] for n in ast.outputs]

        gates = []
        for gi, (target, kind, fanins) in enumerate(ast.assignments):
            gates.append(Gate(kind, tuple(index[f] for f in fanins), index[target]))
        self.gates = gates
        driver = [-1] * len(names)
        for gi, g in enumerate(gates):
            driver[g.output] = gi
        self.driver_of = driver

        fanout: list[list[tuple[int, int]]] = [[] for _ in names]
        for gi, g in enumerate(gates):
            for pin, net in enumerate(g.fanins):
                fanout[net].append((gi, pin))
        self.fanout = fanout

        self.topo_gates = self._toposort()
        self.topo_nets = self.pi_order + [gates[gi].output for gi in self.topo_gates]

    def _toposort(self) -> list[int]:
        n_gates = len(self.gates)
        indeg = [0] * n_gates
        for g in self.gates:
            indeg[self.driver_of[g.output]] = sum(
                1 for f in g.fanins if self.driver_of[f] >= 0
            )
        ready = [gi for gi in range(n_gates) if indeg[gi] == 0]
        order = []
        while ready:
            gi = ready.pop()
            order.append(gi)
            for ci, _pin in self.fanout[self.gates[gi].output]:
                indeg[ci] -= 1
                if indeg[ci] == 0:
                    ready.append(ci)
        if len(order) != n_gates:
            stuck = sorted(
                self.net_names[self.gates[gi].output]
                for gi in range(n_gates)
                if indeg[gi] > 0
            )
            raise CircuitError(f"combinational cycle through nets: {', '.join(stuck)}")
        return order

    @property
    def num_pis(self) -> int:
        return len(self.pi_order)

    @property
    def num_pos(self) -> int:
        return len(self.po_order)

    def to_ast(self) -> BenchAst:
        names = self.net_names
        return BenchAst(
            inputs=[names[n] for n in self.pi_order],
            outputs=[names[n] for n in self.po_order],
            assignments=[
                (names[g.output], g.kind, tuple(names[f] for f in g.fanins))
                for g in self.gates
            ],
        )


def build_circuit(ast: BenchAst) -> Circuit:
    return Circuit(ast)


def cut_dffs(ast: BenchAst) -> BenchAst:
    """Break each ``q = DFF(d)`` into a PPI ``q`` and a PPO ``d``.

    PPIs append after the original inputs in DFF declaration order; PPOs
    append after the original outputs, one per DFF (shared data nets
    repeat).  A DFF-free AST is returned unchanged.
    """
    ppis, ppos, kept = [], [], []
    for target, kind, fanins in ast.assignments:
        if kind == "DFF":
            ppis.append(target)
            ppos.append(fanins[0])
        else:
            kept.append((target, kind, fanins))
    if not ppis:
        return ast
    return BenchAst(
        inputs=list(ast.inputs) + ppis,
        outputs=list(ast.outputs) + ppos,
        assignments=kept,
        comments=list(ast.comments),
    )


def _eval_gate(kind, vals, mask):
    if kind == "AND" or kind == "NAND":
        v = vals[0]
        for x in vals[1:]:
            v &= x
        return v if kind == "AND" else v ^ mask
    if kind == "OR" or kind == "NOR":
        v = vals[0]
        for x in vals[1:]:
            v |= x
        return v if kind == "OR" else v ^ mask
    if kind == "XOR" or kind == "XNOR":
        v = vals[0]
        for x in vals[1:]:
            v ^= x
        return v if kind == "XOR" else v ^ mask
    if kind == "NOT":
        return vals[0] ^ mask
    if kind == "BUF":
        return vals[0]
    raise CircuitError(f"cannot evaluate gate kind {kind!r}")


_TRUTH = {
    "AND": lambda vs: int(all(vs)),
    "NAND": lambda vs: int(not all(vs)),
    "OR": lambda vs: int(any(vs)),
    "NOR": lambda vs: int(not any(vs)),
    "XOR": lambda vs: sum(vs) & 1,
    "XNOR": lambda vs: (sum(vs) & 1) ^ 1,
    "NOT": lambda vs: 1 - vs[0],
    "BUF": lambda vs: vs[0],
}


def evaluate_nets(c: Circuit, assignment) -> list[int]:
    """Scalar evaluation; returns one 0/1 value per net index."""
    if len(assignment) != c.num_pis:
        raise CircuitError(
            f"assignment width {len(assignment)} != PI count {c.num_pis}"
        )
    values = [0] * len(c.net_names)
    for net, bit in zip(c.pi_order, assignment):
        values[net] = bit & 1
    for gi in c.topo_gates:
        g = c.gates[gi]
        values[g.output] = _TRUTH[g.kind]([values[f] for f in g.fanins])
    return values


def simulate(c: Circuit, assignment) -> tuple[int, ...]:
    """Evaluate one input pattern; returns PO bits in po_order."""
    values = evaluate_nets(c, assignment)
    return tuple(values[n] for n in c.po_order)


def simulate_packed(c: Circuit, packed, width: int) -> list[int]:
    """Evaluate ``width`` patterns at once.

    ``packed[i]`` holds pattern bits for PI ``i``: bit ``j`` of the word is
    pattern ``j``'s value.  Returns one word per PO, same lane layout.
    """
    if len(packed) != c.num_pis:
        raise CircuitError(f"packed width {len(packed)} != PI count {c.num_pis}")
    mask = (1 << width) - 1
    values = [0] * len(c.net_names)
    for net, word in zip(c.pi_order, packed):
        values[net] = word & mask
    for gi in c.topo_gates:
        g = c.gates[gi]
        values[g.output] = _eval_gate(g.kind, [values[f] for f in g.fanins], mask)
    return [values[n] for n in c.po_order]


def pack_patterns(patterns, num_pis: int) -> tuple[list[int], int]:
    """Transpose a list of patterns into per-PI words for simulate_packed."""
    packed = [0] * num_pis
    for j, pat in enumerate(patterns):
        if len(pat) != num_pis:
            raise CircuitError(f"pattern width {len(pat)} != PI count {num_pis}")
        for i, bit in enumerate(pat):
            if bit:
                packed[i] |= 1 << j
    return packed, len(patterns)
