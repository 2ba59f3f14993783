"""Report and pattern-file serialization plus rendered figures.

Reports are deterministic tab-delimited text (key-sorted header, then one
line per fault) so CI can diff them.  Wall times are excluded unless
explicitly requested, keeping same-flags-same-seed runs byte-identical.
When figures are enabled, PNGs are written next to the report file.
"""

from __future__ import annotations

from pathlib import Path

from .circuit import Circuit


def format_patterns(patterns, c: Circuit, bench_name: str, label: str = "") -> str:
    names = [c.net_names[n] for n in c.pi_order]
    lines = [
        f"# bench: {bench_name}" + (f" ({label})" if label else ""),
        f"# pi_order: {' '.join(names)}",
    ]
    lines += ["".join(str(b) for b in p) for p in patterns]
    return "\n".join(lines) + "\n"


def parse_patterns(text: str, expected_width: int | None = None):
    patterns = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise ValueError(f"pattern file line {lineno}: expected 0/1 characters")
        if expected_width is not None and len(line) != expected_width:
            raise ValueError(
                f"pattern file line {lineno}: pattern width {len(line)} does not "
                f"match circuit PI count {expected_width}"
            )
        patterns.append(tuple(int(ch) for ch in line))
    return patterns


def _header_lines(meta: dict) -> list[str]:
    return [f"{k}\t{meta[k]}" for k in sorted(meta)]


def format_report(bench_name: str, c: Circuit, sections, meta=None,
                  with_times: bool = False) -> str:
    """Render one report: global header, then one block per approach.

    ``sections`` is a list of ``(label, ApproachResult, CoverageReport)``.
    """
    head = {
        "bench": bench_name,
        "pi_count": c.num_pis,
        "po_count": c.num_pos,
        "gate_count": len(c.gates),
    }
    if meta:
        head.update(meta)
    lines = ["# satatpg report"]
    lines += _header_lines(head)
    for label, res, cov in sections:
        lines.append("")
        lines.append(f"[{label}]")
        lines += _header_lines({
            "total_faults": cov.total_faults,
            "prepass_detected": cov.prepass_detected,
            "sat_detected": cov.detected_sat,
            "redundant": cov.redundant,
            "aborted": cov.aborted,
            "coverage_pct": f"{cov.coverage_pct:.2f}",
            "pattern_count": len(res.patterns),
        })
        cols = ["site", "polarity", "outcome", "evidence", "pattern", "iterations"]
        if with_times:
            cols.append("time_ms")
        lines.append("\t".join(cols))
        for v in sorted(res.verdicts, key=lambda v: (str(v.fault.site),
                                                     v.fault.stuck_at)):
            row = [
                str(v.fault.site),
                f"sa{v.fault.stuck_at}",
                v.outcome,
                v.evidence or "-",
                "-" if v.pattern_index is None else str(v.pattern_index),
                str(v.iterations),
            ]
            if with_times:
                row.append(f"{v.wall_time * 1000:.1f}")
            lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def render_figures(report_path, sections, bench_name: str) -> list[Path]:
    """Write coverage and pattern-count figures next to the report file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    report_path = Path(report_path)
    stem = report_path.with_suffix("")
    written = []

    labels = [label for label, _, _ in sections]
    covs = [cov for _, _, cov in sections]

    fig, ax = plt.subplots(figsize=(6, 4))
    cats = [
        ("prepass", [c.prepass_detected for c in covs], "#4c72b0"),
        ("SAT detected", [c.detected_sat for c in covs], "#55a868"),
        ("redundant", [c.redundant for c in covs], "#c44e52"),
        ("aborted", [c.aborted for c in covs], "#8172b2"),
    ]
    bottoms = [0] * len(covs)
    for name, vals, color in cats:
        ax.bar(labels, vals, bottom=bottoms, label=name, color=color)
        bottoms = [b + v for b, v in zip(bottoms, vals)]
    ax.set_ylabel("faults")
    ax.set_title(f"{bench_name}: fault accounting")
    ax.legend()
    path = Path(f"{stem}.coverage.png")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    counts = [len(res.patterns) for _, res, _ in sections]
    ax.bar(labels, counts, color="#4c72b0")
    ax.set_ylabel("test patterns")
    ax.set_title(f"{bench_name}: pattern counts")
    path = Path(f"{stem}.patterns.png")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written
