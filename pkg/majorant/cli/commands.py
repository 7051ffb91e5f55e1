"""CLI commands for majorant."""

from __future__ import annotations

import json
import logging
import math
import os
import stat
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

import click

from majorant.analysis.bounds import BoundError, build_ledger
from majorant.analysis.quadrature import integrate
from majorant.config import Config, ConfigError
from majorant.models import Verdict
from majorant.prover.driver import ProofEngine, ProofError
from majorant.prover.taylor import (
    TaylorError,
    build_taylor_model,
    certify_negative,
    fourth_bound_for,
)
from majorant.report import published
from majorant.report.emit import FORMATS, emit_report, render_table

_HANDLER_TAG = "_majorant"


def setup_logging(level: str, log_dir: Path | None = None) -> None:
    """Configure logging to stderr and to a rotating file."""
    log_level = getattr(logging, level.upper(), logging.INFO)
    fmt = logging.Formatter(
        "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    root = logging.getLogger()
    root.setLevel(log_level)
    for handler in [h for h in root.handlers if getattr(h, _HANDLER_TAG, False)]:
        root.removeHandler(handler)
        handler.close()

    # Console handler
    console = logging.StreamHandler()
    console.setLevel(log_level)
    console.setFormatter(fmt)
    setattr(console, _HANDLER_TAG, True)
    root.addHandler(console)

    # File handler (5 MB, 3 rotations)
    if log_dir is None:
        log_dir = Path("logs")
    log_dir.mkdir(parents=True, exist_ok=True)
    try:
        os.chmod(log_dir, stat.S_IRWXU)
    except OSError:
        pass
    log_file = log_dir / "majorant.log"
    file_handler = RotatingFileHandler(
        log_file, maxBytes=5 * 1024 * 1024, backupCount=3,
    )
    file_handler.setLevel(log_level)
    file_handler.setFormatter(fmt)
    setattr(file_handler, _HANDLER_TAG, True)
    root.addHandler(file_handler)


def _command_config(
    ctx: click.Context, budget_file: Path | None = None, nodes: int | None = None
) -> Config:
    """Apply command overrides to the group config and validate the result."""
    base: Config = ctx.obj["config"]
    try:
        config = base.with_overrides(budget_file=budget_file, nodes_override=nodes)
    except ConfigError as e:
        click.echo(f"Configuration error: {e}", err=True)
        sys.exit(1)

    errors = config.validate()
    if errors:
        click.echo("Configuration errors:", err=True)
        for error in errors:
            click.echo(f"  - {error}", err=True)
        sys.exit(1)

    if nodes is not None and nodes > config.max_nodes:
        click.echo(f"Warning: --n {nodes} is above the node cap of {config.max_nodes}", err=True)
    return config


def _write(text: str, out: Path | None, config: Config) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    if not out.is_absolute() and out.parent == Path("."):
        out = config.report_dir / out
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    click.echo(f"Wrote {out}", err=True)


format_option = click.option(
    "--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True,
    help="Output format",
)
out_option = click.option(
    "--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Write output to this file (bare names go to MAJORANT_REPORT_DIR)",
)
nodes_option = click.option(
    "--n", "nodes", type=int, default=None, help="Override every quadrature node count",
)
budget_option = click.option(
    "--budget-file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None, help="JSON file overriding the error budgets",
)


@click.group()
@click.option("--log-level", default=None, help="Log level (DEBUG, INFO, WARNING, ERROR)")
@click.pass_context
def cli(ctx: click.Context, log_level: str | None) -> None:
    """majorant: certified checks of the majorant inequality for k = 3 and 4."""
    config = Config()
    if log_level:
        config.log_level = log_level
    setup_logging(config.log_level, config.log_dir)
    ctx.ensure_object(dict)
    ctx.obj["config"] = config


@cli.command()
@click.option("--k", "k", type=click.IntRange(3, 4), required=True, help="Case to prove")
@format_option
@out_option
@nodes_option
@budget_option
@click.pass_context
def prove(
    ctx: click.Context,
    k: int,
    fmt: str,
    out: Path | None,
    nodes: int | None,
    budget_file: Path | None,
) -> None:
    """Run the full certified proof for k and emit the report."""
    config = _command_config(ctx, budget_file, nodes)
    try:
        report = ProofEngine.create(config).prove(k)
    except ProofError as e:
        click.echo(f"Proof could not start: {e}", err=True)
        sys.exit(1)

    _write(emit_report(report, fmt), out, config)
    click.echo(f"k={k}: {report.verdict.value}", err=True)
    sys.exit(0 if report.verdict is Verdict.VERIFIED else 1)


@cli.command()
@click.option("--which", type=click.IntRange(1, 3), required=True, help="Coefficient table")
@format_option
@out_option
@nodes_option
@budget_option
@click.pass_context
def tables(
    ctx: click.Context,
    which: int,
    fmt: str,
    out: Path | None,
    nodes: int | None,
    budget_file: Path | None,
) -> None:
    """Recompute one Taylor coefficient table and certify its sign chain."""
    config = _command_config(ctx, budget_file, nodes)
    k, center = published.TABLES[which]
    case = config.budget_for(k)
    model_budget = next((m for m in case.models if m.center == center), None)
    if model_budget is None:
        click.echo(f"No model centered at {center} in the k={k} budgets", err=True)
        sys.exit(1)

    ledger = build_ledger(k, config.grid_points, case.ell_cap, config.vgrid_points)
    try:
        model = build_taylor_model(
            k, case.order, model_budget.center, model_budget.radius, model_budget.degree,
            model_budget.deltas, model_budget.total,
            ledger=ledger,
            nodes=nodes or case.coefficient_nodes,
            max_nodes=config.max_nodes,
        )
    except TaylorError as e:
        click.echo(f"Table {which} failed: {e}", err=True)
        sys.exit(1)

    table = model.to_dict()
    table["table"] = which
    for row in table["rows"]:
        j = row["j"]
        row["published_d_bar"] = published.COEFFICIENTS[center][j]
        row["published_fourth_bound"] = published.FOURTH_BOUNDS[center][j]
        row["published_n_star"] = published.N_STAR[center][j]

    passed = True
    try:
        table["certificate"] = certify_negative(model).to_dict()
    except TaylorError as e:
        table["certificate"] = {"error": str(e)}
        passed = False

    text = json.dumps(table, indent=2) + "\n" if fmt == "json" else render_table(table) + "\n"
    _write(text, out, config)
    sys.exit(0 if passed else 1)


@cli.command()
@click.option("--k", "k", type=click.IntRange(min=1), required=True, help="Degree parameter")
@format_option
@out_option
@click.pass_context
def bounds(ctx: click.Context, k: int, fmt: str, out: Path | None) -> None:
    """Print the bound ledger for k."""
    config = _command_config(ctx)
    case = config.budgets.get(k)
    ledger = build_ledger(
        k, config.grid_points, case.ell_cap if case else None, config.vgrid_points
    )

    data = ledger.to_dict()
    data["ratios"] = [
        None if r is None else {
            "family": r.family.label,
            "maximum": r.maximum,
            "argmax_u": r.argmax,
            "certified": r.certified,
            "reported": r.reported,
            "denominator_min": r.denominator_min,
            "denominator_argmin_u": r.denominator_argmin,
        }
        for r in ledger.ratios
    ]
    data["minima"] = [
        {"family": m.family.label, "observed": m.observed, "argmin_x": m.argmin,
         "certified": m.certified}
        for m in ledger.minima
    ]
    fourth = {}
    if case:
        for pos in case.positivity:
            try:
                fourth[str(pos.order)] = fourth_bound_for(k, float(k), pos.order, ledger)
            except BoundError as e:
                fourth[str(pos.order)] = f"unavailable: {e}"
    data["fourth_bounds_at_k"] = fourth
    for key in ("ell_derived", "ell_max"):
        if math.isinf(data[key]):
            data[key] = None

    if fmt == "json":
        text = json.dumps(data, indent=2) + "\n"
    else:
        lines = [f"# Bound ledger, k = {k}", ""]
        lines += [f"- M_{m} = {value:.10g}" for m, value in enumerate(data["M"])]
        lines.append(f"- M* = {data['M_star']}")
        for r in data["ratios"]:
            if r:
                lines.append(
                    f"- {r['family']}: max G'^2/G = {r['maximum']:.4f}, bound {r['reported']:g}, "
                    f"min denominator {r['denominator_min']:.5f}"
                )
        for m in data["minima"]:
            lines.append(
                f"- {m['family']}: min G = {m['observed']:.6f} (certified {m['certified']:.6f})"
            )
        lines.append(f"- ell_max = {data['ell_max']}")
        for order, value in fourth.items():
            lines.append(f"- sup |H^IV| for d^({order})({k}): {value}")
        text = "\n".join(lines) + "\n"
    _write(text, out, config)


def _demo_cases():
    two_pi = 2 * math.pi
    return [
        (
            "sin(2 pi x)",
            lambda x: math.sin(two_pi * x),
            lambda x: -(two_pi**2) * math.sin(two_pi * x),
            two_pi**4,
            1 / math.pi,
        ),
        ("x^4", lambda x: x**4, lambda x: 12 * x**2, 24.0, 1 / 160),
    ]


@cli.command("quad-demo")
@format_option
@out_option
@click.pass_context
def quad_demo(ctx: click.Context, fmt: str, out: Path | None) -> None:
    """Show the N^-4 convergence of the quadrature rule and its certificate."""
    config = _command_config(ctx)
    rows = []
    for name, f, f2, fourth, exact in _demo_cases():
        previous = None
        for N in (25, 50, 100, 200):
            result = integrate(f, f2, fourth, N)
            actual = abs(result.value - exact)
            rows.append({
                "function": name,
                "N": N,
                "value": result.value,
                "actual_error": actual,
                "error_bound": result.error_bound,
                "ratio": previous / actual if previous and actual else None,
                "certified": actual <= result.error_bound * (1 + 1e-9) + 1e-15,
            })
            previous = actual

    if fmt == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        lines = [
            "| function | N | value | actual error | bound | ratio | certified |",
            "|---|---|---|---|---|---|---|",
        ]
        for r in rows:
            ratio = f"{r['ratio']:.2f}" if r["ratio"] else "-"
            lines.append(
                f"| {r['function']} | {r['N']} | {r['value']:.15g} | {r['actual_error']:.3e} "
                f"| {r['error_bound']:.3e} | {ratio} | {'yes' if r['certified'] else 'no'} |"
            )
        text = "\n".join(lines) + "\n"
    _write(text, out, config)
    sys.exit(0 if all(r["certified"] for r in rows) else 1)


if __name__ == "__main__":
    cli()
