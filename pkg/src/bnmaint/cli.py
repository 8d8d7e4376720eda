"""Command-line interface.

Exit codes: 0 success, 1 domain failure (validation findings, rejected op,
differences found), 2 usage or parse failure.
"""

from __future__ import annotations

import itertools
import json
import os
import sys
from pathlib import Path

import click

from . import cost as costmod
from . import edits, netio, oracle
from .diff import diff_networks, format_diff
from .network import ROW_SUM_TOLERANCE, validate_network
from .script import ScriptError, apply_script, parse_script

JOINT_CAP_ENV = "BNMAINT_JOINT_CAP"


def _load_network(path: str):
    try:
        return netio.load_network(path)
    except netio.ParseError as e:
        click.echo(f"error: {path}: {e}", err=True)
        sys.exit(2)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        click.echo(
            f"error: {path}: parse error at line {e.lineno} column {e.colno}: {e.msg}",
            err=True,
        )
        sys.exit(2)


def _parse_range(text: str) -> list[int]:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise ValueError
            return list(range(lo_i, hi_i + 1))
        return [int(text)]
    except ValueError:
        raise click.BadParameter(f"expected N or LO:HI, got {text!r}") from None


def _parse_radices(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}")


@click.group()
@click.version_option(package_name="bnmaint")
def main() -> None:
    """Maintain discrete probabilistic networks as transactional edits."""


@main.command()
@click.argument("network_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--tolerance",
    type=float,
    default=ROW_SUM_TOLERANCE,
    show_default=True,
    help="Row-sum tolerance for validation findings.",
)
def validate(network_file: str, tolerance: float) -> None:
    """Check a network file; print one finding per line."""
    net = _load_network(network_file)
    report = validate_network(net, tolerance=tolerance)
    for finding in report.findings:
        click.echo(finding.message)
    sys.exit(0 if report.ok else 1)


@main.command()
@click.argument("network_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("script_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "-o",
    "--out",
    "out_file",
    required=True,
    type=click.Path(dir_okay=False),
    help="Where to write the edited network (only on full success).",
)
@click.option(
    "--report",
    "report_file",
    type=click.Path(dir_okay=False),
    default=None,
    help="Also write the aggregated assessment counts as CSV.",
)
def apply(network_file: str, script_file: str, out_file: str, report_file: str | None) -> None:
    """Apply a change script; all ops succeed or nothing is written."""
    net = _load_network(network_file)
    base = validate_network(net)
    if not base.ok:
        for finding in base.findings:
            click.echo(finding.message, err=True)
        click.echo("error: input network is invalid", err=True)
        sys.exit(1)
    doc = _load_json(script_file)
    try:
        ops = parse_script(doc)
    except netio.ParseError as e:
        click.echo(f"error: {script_file}: {e}", err=True)
        sys.exit(2)
    try:
        result = apply_script(net, ops)
    except ScriptError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)

    for i, t in enumerate(result.transactions, 1):
        header = f"op {i}: {t.op.kind} mode={t.op.mode} node={t.op.node}"
        if t.op.source:
            header += f" from={t.op.source}"
        click.echo(header)
        for entry in t.report.nodes:
            click.echo(
                f"  {entry.node}: elicited={entry.elicited} "
                f"reused={entry.reused} baseline={entry.baseline}"
            )
        for note in t.report.notes:
            click.echo(f"  note: {note}")
    reports = [t.report for t in result.transactions]
    total = costmod.aggregate_reports(reports, result.final.ids())
    click.echo(
        f"total: elicited={total.total_elicited} reused={total.total_reused} "
        f"baseline={total.total_baseline}"
    )
    netio.save_network(result.final, out_file)
    if report_file is not None:
        netio.write_text_atomic(report_file, costmod.audit_csv(total))
    click.echo(f"wrote {out_file} (version {result.final.version_label})")


@main.command()
@click.option("--case", "case_", type=click.Choice(costmod.CASES), required=True)
@click.option("--role", type=click.Choice(costmod.ROLES), required=True)
@click.option("--m", type=int, default=1, show_default=True, help="Old outcome count.")
@click.option("--k", type=int, default=1, show_default=True, help="New/added outcome count.")
@click.option(
    "--p", type=int, default=2, show_default=True, help="Successor outcome count."
)
@click.option(
    "--radices",
    default="",
    help="Comma-separated outcome counts of the conditioning set, e.g. 2,3.",
)
def cost(case_: str, role: str, m: int, k: int, p: int, radices: str) -> None:
    """Print general/special assessment counts and their ratio."""
    query = costmod.CostQuery(case_, role, m, k, p, _parse_radices(radices))
    try:
        result = costmod.assessment_cost(query)
    except ValueError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    ratio = "undefined" if result.ratio is None else f"{result.ratio}"
    click.echo(f"general={result.general}, special={result.special}, ratio={ratio}")


@main.command()
@click.option("--case", "case_", type=click.Choice(costmod.CASES), required=True)
@click.option("--role", type=click.Choice(costmod.ROLES), required=True)
@click.option("--m-range", default="1:6", show_default=True, help="N or LO:HI.")
@click.option("--k-range", default="1:10", show_default=True, help="N or LO:HI.")
@click.option(
    "--out",
    "out_file",
    type=click.Path(dir_okay=False),
    default=None,
    help="CSV output path (stdout when omitted).",
)
def curves(case_: str, role: str, m_range: str, k_range: str, out_file: str | None) -> None:
    """Emit the special/general ratio surface as CSV."""
    points = costmod.ratio_curves(
        case_, role, _parse_range(m_range), _parse_range(k_range)
    )
    text = costmod.curves_csv(case_, role, points)
    if out_file is None:
        click.echo(text, nl=False)
    else:
        netio.write_text_atomic(out_file, text)


@main.command("diff")
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--tolerance",
    type=float,
    default=ROW_SUM_TOLERANCE,
    show_default=True,
    help="Report CPT cells differing by more than this.",
)
def diff_cmd(file_a: str, file_b: str, tolerance: float) -> None:
    """Compare two network files; exit 0 only when identical."""
    a = _load_network(file_a)
    b = _load_network(file_b)
    entries = diff_networks(a, b, tolerance=tolerance)
    if entries:
        click.echo(format_diff(entries))
    sys.exit(1 if entries else 0)


# the function name avoids shadowing the oracle module
@main.group("oracle", hidden=True)
def oracle_group() -> None:
    """Debugging helpers."""


@oracle_group.command("joint")
@click.argument("network_file", type=click.Path(exists=True, dir_okay=False))
def oracle_joint(network_file: str) -> None:
    """Dump the full joint distribution, one assignment per line."""
    net = _load_network(network_file)
    cap = oracle.DEFAULT_CELL_CAP
    env = os.environ.get(JOINT_CAP_ENV)
    if env:
        try:
            cap = int(env)
        except ValueError:
            click.echo(f"error: {JOINT_CAP_ENV} must be an integer", err=True)
            sys.exit(2)
    try:
        table = oracle.joint_distribution(net, cap=cap)
    except oracle.OracleError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    ranges = [range(len(outs)) for outs in table.outcomes]
    for assignment in itertools.product(*ranges):
        labels = " ".join(
            f"{var}={outs[i]}"
            for var, outs, i in zip(table.variables, table.outcomes, assignment)
        )
        click.echo(f"{labels}\t{float(table.probs[assignment])}")


if __name__ == "__main__":
    main()
