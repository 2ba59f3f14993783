"""Reading and writing combinational netlists in .bench format.

The .bench dialect accepted here is the one used by the ITC'99 ``_C``
suite: ``INPUT(n)`` / ``OUTPUT(n)`` declarations, gate assignments of the
form ``n = KIND(a, b, ...)``, blank lines, and ``#`` comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

# kind -> (min fanins, max fanins or None for unbounded)
GATE_ARITY = {
    "AND": (2, None),
    "NAND": (2, None),
    "OR": (2, None),
    "NOR": (2, None),
    "XOR": (2, None),
    "XNOR": (2, None),
    "NOT": (1, 1),
    "BUF": (1, 1),
    "DFF": (1, 1),
}

_NAME_RE = re.compile(r"[A-Za-z0-9_\[\].]+")
_DECL_RE = re.compile(r"^(INPUT|OUTPUT)\s*\(\s*([A-Za-z0-9_\[\].]+)\s*\)$")
_ASSIGN_RE = re.compile(
    r"^([A-Za-z0-9_\[\].]+)\s*=\s*([A-Za-z0-9_]+)\s*\((.*)\)$"
)


class BenchParseError(ValueError):
    """Raised on any malformed .bench input; carries the 1-based line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass
class BenchAst:
    """Parsed .bench file: declaration order is significant everywhere."""

    inputs: list[str]
    outputs: list[str]
    # (target net, gate kind, fanin nets)
    assignments: list[tuple[str, str, tuple[str, ...]]]
    comments: list[str] = field(default_factory=list, compare=False)


def parse_bench(text: str) -> BenchAst:
    """Parse .bench text into a validated :class:`BenchAst`."""
    inputs: list[str] = []
    outputs: list[str] = []
    assignments: list[tuple[str, str, tuple[str, ...]]] = []
    comments: list[str] = []
    targets: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue

        m = _DECL_RE.match(line)
        if m:
            kind, name = m.groups()
            (inputs if kind == "INPUT" else outputs).append(name)
            continue

        m = _ASSIGN_RE.match(line)
        if m is None:
            raise BenchParseError(f"unrecognized syntax: {line!r}", lineno)
        target, kind, args = m.groups()
        if kind not in GATE_ARITY:
            raise BenchParseError(
                f"unknown gate kind {kind!r} driving net {target!r}", lineno
            )
        fanins = tuple(a.strip() for a in args.split(","))
        if any(not f for f in fanins):
            raise BenchParseError(
                f"empty fanin (trailing comma?) in driver of {target!r}", lineno
            )
        for f in fanins:
            if not _NAME_RE.fullmatch(f):
                raise BenchParseError(
                    f"bad fanin name {f!r} in driver of {target!r}", lineno
                )
        lo, hi = GATE_ARITY[kind]
        if len(fanins) < lo or (hi is not None and len(fanins) > hi):
            raise BenchParseError(
                f"{kind} driving {target!r} takes "
                f"{'exactly %d' % lo if hi == lo else 'at least %d' % lo}"
                f" fanins, got {len(fanins)}",
                lineno,
            )
        if target in targets:
            raise BenchParseError(
                f"net {target!r} already driven (first at line {targets[target]})",
                lineno,
            )
        if target in inputs:
            raise BenchParseError(
                f"net {target!r} is a primary input and cannot be driven", lineno
            )
        targets[target] = lineno
        assignments.append((target, kind, fanins))

    declared = set(inputs) | set(targets)
    for target, kind, fanins in assignments:
        for f in fanins:
            if f not in declared:
                raise BenchParseError(
                    f"undeclared fanin {f!r} in driver of {target!r}",
                    targets[target],
                )
    for name in outputs:
        if name not in declared:
            raise BenchParseError(f"OUTPUT({name}) has no driver")

    overlap = set(inputs) & set(targets)
    if overlap:
        name = sorted(overlap)[0]
        raise BenchParseError(
            f"net {name!r} is both a primary input and a gate output",
            targets[name],
        )

    seen_in = set()
    for name in inputs:
        if name in seen_in:
            raise BenchParseError(f"duplicate INPUT({name})")
        seen_in.add(name)

    return BenchAst(inputs, outputs, assignments, comments)


def write_bench(ast: BenchAst) -> str:
    """Serialize an AST back to .bench text; round-trips structurally."""
    if not ast.inputs:
        raise ValueError("circuit has no primary inputs")
    if not ast.outputs:
        raise ValueError("circuit has no primary outputs")
    lines = [f"# {c}" if c else "#" for c in ast.comments]
    lines += [f"INPUT({n})" for n in ast.inputs]
    lines += [f"OUTPUT({n})" for n in ast.outputs]
    lines.append("")
    for target, kind, fanins in ast.assignments:
        lines.append(f"{target} = {kind}({', '.join(fanins)})")
    return "\n".join(lines) + "\n"


def load_bench(path) -> BenchAst:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_bench(fh.read())


def save_bench(ast: BenchAst, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_bench(ast))
