"""Stuck-at fault universe: stems, fanout branches, and site addressing.

A stem site is a whole net; a branch site is one consumer pin of a net
that feeds two or more gate pins.  Branch sites are made addressable by
splicing a renaming buffer in front of the target pin, which leaves the
circuit function untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bench_io import BenchAst
from .circuit import Circuit, build_circuit


class FaultError(ValueError):
    pass


@dataclass(frozen=True)
class FaultSite:
    net: str  # stem net name
    # (consumer gate output-net name, pin position) for a branch, else None
    branch: tuple[str, int] | None = None

    def __str__(self):
        if self.branch is None:
            return self.net
        gate, pin = self.branch
        return f"{self.net}->{gate}.{pin}"


@dataclass(frozen=True)
class Fault:
    site: FaultSite
    stuck_at: int  # 0 or 1

    def __str__(self):
        return f"{self.site} sa{self.stuck_at}"


def enumerate_faults(c: Circuit) -> list[Fault]:
    """Both polarities at every stem net and every fanout-branch pin.

    Order is stable: nets in topological order; per net the stem site
    first, then branch sites by consumer position; sa0 before sa1.
    """
    names = c.net_names
    faults = []
    for net in c.topo_nets:
        sites = [FaultSite(names[net])]
        consumers = c.fanout[net]
        if len(consumers) >= 2:
            for gi, pin in consumers:
                gate_name = names[c.gates[gi].output]
                sites.append(FaultSite(names[net], (gate_name, pin)))
        for site in sites:
            faults.append(Fault(site, 0))
            faults.append(Fault(site, 1))
    return faults


def _unique_name(base: str, taken) -> str:
    name = base
    n = 1
    while name in taken:
        name = f"{base}_{n}"
        n += 1
    return name


def insert_branch_buffer_ast(ast: BenchAst, site: FaultSite) -> tuple[BenchAst, str]:
    """Splice ``buf = BUF(stem)`` in front of exactly the target pin.

    Returns the rewritten AST and the buffer's output net name.  The AST
    is not mutated.
    """
    if site.branch is None:
        raise FaultError(f"site {site} is a stem, not a fanout branch")
    gate_name, pin = site.branch
    taken = set(ast.inputs) | {t for t, _, _ in ast.assignments}
    buf_name = _unique_name(f"{site.net}_br_{gate_name}_{pin}", taken)

    assignments = []
    found = False
    for target, kind, fanins in ast.assignments:
        if target == gate_name:
            if pin >= len(fanins) or fanins[pin] != site.net:
                raise FaultError(
                    f"site {site}: pin {pin} of gate {gate_name!r} does not "
                    f"read net {site.net!r}"
                )
            fanins = fanins[:pin] + (buf_name,) + fanins[pin + 1 :]
            found = True
        assignments.append((target, kind, fanins))
    if not found:
        raise FaultError(f"site {site}: no gate named {gate_name!r}")
    assignments.append((buf_name, "BUF", (site.net,)))
    return (
        BenchAst(list(ast.inputs), list(ast.outputs), assignments, list(ast.comments)),
        buf_name,
    )


def insert_branch_buffer(c: Circuit, site: FaultSite) -> tuple[Circuit, int]:
    """Circuit-level form of :func:`insert_branch_buffer_ast`."""
    ast, buf_name = insert_branch_buffer_ast(c.to_ast(), site)
    nc = build_circuit(ast)
    return nc, nc.net_index[buf_name]


def validate_fault(c: Circuit, f: Fault) -> None:
    """Reject faults that do not address a site of this circuit."""
    if f.stuck_at not in (0, 1):
        raise FaultError(f"bad polarity in {f}")
    if f.site.net not in c.net_index:
        raise FaultError(f"unknown net {f.site.net!r} in fault {f}")
    if f.site.branch is not None:
        net = c.net_index[f.site.net]
        if len(c.fanout[net]) < 2:
            raise FaultError(f"fault {f}: net {f.site.net!r} has no fanout branches")
        gate_name, pin = f.site.branch
        for gi, p in c.fanout[net]:
            if p == pin and c.net_names[c.gates[gi].output] == gate_name:
                return
        raise FaultError(f"fault {f}: branch {gate_name}.{pin} not found")


def format_fault_list(faults) -> str:
    return "".join(f"{f}\n" for f in faults)


def parse_fault_list(text: str, c: Circuit) -> list[Fault]:
    """Parse the ``SITE sa0|sa1`` per-line fault file format."""
    faults = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("sa0", "sa1"):
            raise FaultError(f"fault file line {lineno}: expected 'SITE sa0|sa1'")
        sitespec, pol = parts
        if "->" in sitespec:
            net, rest = sitespec.split("->", 1)
            gate, _, pin = rest.rpartition(".")
            if not gate or not pin.isdigit():
                raise FaultError(
                    f"fault file line {lineno}: bad branch site {sitespec!r}"
                )
            site = FaultSite(net, (gate, int(pin)))
        else:
            site = FaultSite(sitespec)
        f = Fault(site, int(pol[2]))
        validate_fault(c, f)
        faults.append(f)
    return faults
