"""Report serialization: JSON (round-trippable) and Markdown.

JSON schema (top level, in this order):

    k            int
    verdict      "VERIFIED" | "FAILED"
    steps        [{name, claim, passed, value, error, margin, published,
                   message, elapsed, details}]
    config       budgets, node counts, guards and the bound ledger used
    tables       one entry per Taylor model with per-coefficient rows
    spot_checks  [{t, value, error, positive}]  (not certified)
    notes        [str]
"""

from __future__ import annotations

import json

from majorant.models import ProofReport

FORMATS = ("json", "md")


def emit_report(report: ProofReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt in ("md", "markdown"):
        return render_markdown(report)
    raise ValueError(f"Unknown report format {fmt!r}; use one of {FORMATS}")


def parse_report(text: str) -> ProofReport:
    """Inverse of the JSON rendering."""
    return ProofReport.from_dict(json.loads(text))


def _num(value, digits: int = 10) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    return f"{value:.{digits}g}"


def render_markdown(report: ProofReport) -> str:
    lines = [
        f"# Majorant proof, k = {report.k}",
        "",
        f"**Verdict: {report.verdict.value}** "
        f"({len(report.steps)} steps, {report.total_elapsed:.1f}s)",
        "",
        "## Steps",
        "",
        "| step | claim | computed | published | error | margin | status |",
        "|---|---|---|---|---|---|---|",
    ]
    for step in report.steps:
        status = "PASS" if step.passed else "FAIL"
        lines.append(
            f"| {step.name} | {step.claim} | {_num(step.value)} | {_num(step.published)} "
            f"| {_num(step.error, 4)} | {_num(step.margin, 4)} | {status} |"
        )
    failures = [s for s in report.steps if s.message]
    if failures:
        lines += ["", "### Messages", ""]
        lines += [f"- **{s.name}**: {s.message}" for s in failures]

    for table in report.tables:
        lines += ["", render_table(table)]

    conclusion = next((s for s in report.steps if s.name == "conclusion"), None)
    if conclusion and conclusion.details.get("chain"):
        lines += ["", "## Conclusion", ""]
        lines += [f"{i}. {item}" for i, item in enumerate(conclusion.details["chain"], 1)]

    if report.spot_checks:
        lines += [
            "", "## Spot checks (not certified)", "",
            "| t | d(t) | quadrature error | positive |", "|---|---|---|---|",
        ]
        for check in report.spot_checks:
            lines.append(
                f"| {check['t']:g} | {_num(check['value'])} | {_num(check['error'], 3)} "
                f"| {_num(check['positive'])} |"
            )

    if report.notes:
        lines += ["", "## Notes", ""]
        lines += [f"- {note}" for note in report.notes]

    return "\n".join(lines) + "\n"


def render_table(table: dict) -> str:
    """Coefficient table of one Taylor model, ours beside the published values."""
    number = table.get("table")
    title = f"Table {number}: " if number else ""
    lines = [
        f"## {title}Taylor coefficients of d^({table['order']}) around t0 = {table['center']:g}",
        "",
        f"radius {table['radius']:g}, degree {table['degree']}, remainder "
        f"{table['remainder']:.4g}, budget sum {table['budget_sum']:.4g} < {table['total']:g}",
        "",
        "| j | H^IV bound | published bound | delta_j | N*_j | published N* | N_j "
        "| d_bar_j | published d_bar_j |",
        "|---|---|---|---|---|---|---|---|---|",
    ]
    for row in table["rows"]:
        lines.append(
            f"| {row['j']} | {_num(row['fourth_bound'], 3)} "
            f"| {_num(row.get('published_fourth_bound'), 3)} | {_num(row['delta'], 3)} "
            f"| {row['n_star']:.1f} | {_num(row.get('published_n_star'))} | {row['nodes']} "
            f"| {_num(row['d_bar'])} | {_num(row.get('published_d_bar'))} |"
        )
    return "\n".join(lines)
