"""Operator command line: run the service, size password spaces, analyze logs.

Exit codes: 0 success, 1 generic failure, 2 configuration/usage error,
3 bind failure.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from .counting import SpaceConfig, total_space
from .events import read_event_log
from .reporting import (
    DEFAULT_ALPHAS,
    build_report,
    render_report_text,
    report_json_bytes,
    write_csv_tables,
)
from .service import META_FILENAME, ServiceConfig, ServiceConfigError, create_app

EXIT_GENERIC = 1
EXIT_CONFIG = 2
EXIT_BIND = 3


@click.group()
def main() -> None:
    """Grid placement authentication toolkit."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(), help="Service config JSON.")
def serve(config_path: str) -> None:
    """Run the authentication service until interrupted."""
    import uvicorn

    try:
        config = ServiceConfig.from_file(config_path)
        app = create_app(config)
    except ServiceConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)

    # Probe the port up front so a busy bind is a clean, distinct failure.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((config.bind, config.port))
    except OSError as exc:
        click.echo(f"cannot bind {config.bind}:{config.port}: {exc}", err=True)
        sys.exit(EXIT_BIND)
    finally:
        probe.close()

    uvicorn.run(app, host=config.bind, port=config.port, log_level="info")


@main.command()
@click.option("--cells", type=int, required=True, help="Total grid cells.")
@click.option("--sets", "sets_csv", required=True, help="Comma-separated set sizes, e.g. 40,90,50.")
@click.option("--kmin", type=int, required=True)
@click.option("--kmax", type=int, required=True)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def entropy(cells: int, sets_csv: str, kmin: int, kmax: int, as_json: bool) -> None:
    """Exact password space and theoretical entropy for a configuration."""
    try:
        sizes = tuple(int(part) for part in sets_csv.split(",") if part.strip())
        config = SpaceConfig(grid_cells=cells, set_sizes=sizes, k_min=kmin, k_max=kmax)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    result = total_space(config)
    if as_json:
        click.echo(
            json.dumps(
                {
                    "grid_cells": cells,
                    "set_sizes": list(sizes),
                    "k_min": kmin,
                    "k_max": kmax,
                    "per_k": {str(k): str(v) for k, v in result.per_k.items()},
                    "total": str(result.total),
                    "entropy_bits": result.entropy_bits,
                },
                sort_keys=True,
            )
        )
        return
    click.echo(f"grid cells: {cells}, set sizes: {sizes}, k in [{kmin}, {kmax}]")
    click.echo("per-k arrangements:")
    for k, value in result.per_k.items():
        click.echo(f"  k={k}: {value}")
    click.echo(f"total password space: {result.total}")
    click.echo(f"theoretical entropy: {result.entropy_bits:.4f} bits")


@main.command()
@click.option("--log", "log_path", required=True, type=click.Path(), help="Event log file or data directory.")
@click.option("--alpha", "alpha_csv", default=None, help="Comma-separated work-factor fractions.")
@click.option("--policy", "policy_path", default=None, type=click.Path(), help="Policy JSON for grid shape / study flag.")
@click.option("--json", "as_json", is_flag=True, help="Emit the canonical JSON report.")
@click.option("--csv-dir", "csv_dir", default=None, type=click.Path(), help="Also write CSV tables here.")
def analyze(
    log_path: str,
    alpha_csv: str | None,
    policy_path: str | None,
    as_json: bool,
    csv_dir: str | None,
) -> None:
    """Offline analytics over an event log; matches the live /api/analytics report."""
    path = Path(log_path)
    events_file = path / "events.jsonl" if path.is_dir() else path
    if not events_file.exists():
        click.echo(f"event log not found: {events_file}", err=True)
        sys.exit(EXIT_CONFIG)

    rows, cols, study_mode, meta_alphas = _analysis_parameters(events_file, policy_path)

    alphas = tuple(meta_alphas)
    if alpha_csv is not None:
        try:
            alphas = tuple(float(part) for part in alpha_csv.split(",") if part.strip())
        except ValueError:
            raise click.UsageError(f"bad --alpha list: {alpha_csv!r}")

    records, skipped = read_event_log(events_file)
    if skipped:
        click.echo(f"warning: skipped {skipped} corrupt log line(s)", err=True)
    if not records and skipped:
        click.echo("every log line was corrupt", err=True)
        sys.exit(EXIT_GENERIC)

    report = build_report(
        records, rows=rows, cols=cols, study_mode=study_mode, alphas=alphas
    )
    if csv_dir is not None:
        write_csv_tables(report, csv_dir)
    if as_json:
        sys.stdout.buffer.write(report_json_bytes(report))
    else:
        click.echo(render_report_text(report))


def _analysis_parameters(
    events_file: Path, policy_path: str | None
) -> tuple[int, int, bool, tuple[float, ...]]:
    """Grid shape and study flag: explicit policy, else service meta sidecar,
    else the 4x4 study-style default (noted on stderr)."""
    if policy_path is not None:
        from .model import PolicyError, load_policy

        try:
            policy = load_policy(policy_path)
        except (OSError, json.JSONDecodeError, PolicyError) as exc:
            click.echo(f"cannot load policy {policy_path}: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        return policy.rows, policy.cols, policy.study_mode, DEFAULT_ALPHAS

    meta_path = events_file.parent / META_FILENAME
    if meta_path.exists():
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            return (
                int(meta["rows"]),
                int(meta["cols"]),
                bool(meta["study_mode"]),
                tuple(float(a) for a in meta.get("alphas", DEFAULT_ALPHAS)),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            click.echo(f"ignoring unreadable {meta_path}: {exc}", err=True)

    click.echo(
        "note: no --policy and no meta.json next to the log; "
        "assuming a 4x4 grid with study mode on",
        err=True,
    )
    return 4, 4, True, DEFAULT_ALPHAS


if __name__ == "__main__":
    main()
