"""Report assembly: event log in, JSON/CSV analytics out.

The report is a pure function of the log contents plus grid shape and study
flag, and its JSON serialization is canonical (sorted keys, fixed
separators), so replaying the same log always reproduces byte-identical
output. Secret-derived sections appear only when the deployment ran in study
mode; otherwise they are replaced by an explicit unavailability marker.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

from .analytics import (
    AttemptRecord,
    SecretDistribution,
    Stage,
    co_occurrences,
    element_frequencies,
    empirical_entropy,
    entropy_upper_bound,
    expected_guesswork,
    success_rate,
    work_factor,
)
from .events import KIND_LOGIN_ATTEMPT, KIND_REGISTERED, EventRecord
from .model import SecretConfiguration, SecretEncodingError, canonicalize, parse_canonical
from .patterns import PatternKind, classify_pattern

REPORT_VERSION = 1
DEFAULT_ALPHAS = (0.1, 0.2, 0.5)
TOP_CO_OCCURRENCES_PER_SET = 5


def _alpha_key(alpha: float) -> str:
    return repr(float(alpha))


def attempts_from_events(records: Iterable[EventRecord]) -> list[AttemptRecord]:
    attempts = []
    for record in records:
        if record.kind != KIND_LOGIN_ATTEMPT:
            continue
        payload = record.payload
        try:
            attempts.append(
                AttemptRecord(
                    username=str(payload["username"]),
                    timestamp=record.timestamp,
                    stage=Stage(payload.get("stage", "other")),
                    success=bool(payload["success"]),
                    duration_seconds=float(payload.get("duration_seconds", 0.0)),
                )
            )
        except (KeyError, ValueError, TypeError):
            continue
    return attempts


def secrets_from_events(records: Iterable[EventRecord]) -> list[SecretConfiguration]:
    """Observed secrets from study-mode registration events, in log order."""
    secrets = []
    for record in records:
        if record.kind != KIND_REGISTERED:
            continue
        canonical = record.payload.get("canonical")
        if canonical is None:
            continue
        try:
            secrets.append(parse_canonical(canonical))
        except SecretEncodingError:
            continue
    return secrets


def build_report(
    records: Sequence[EventRecord],
    *,
    rows: int,
    cols: int,
    study_mode: bool,
    alphas: Sequence[float] = DEFAULT_ALPHAS,
) -> dict[str, Any]:
    """Assemble the full analytics report from replayed events."""
    registrations = sum(1 for r in records if r.kind == KIND_REGISTERED)
    attempts = attempts_from_events(records)

    report: dict[str, Any] = {
        "v": REPORT_VERSION,
        "registrations": registrations,
        "attempts": {
            "total": len(attempts),
            "successes": sum(1 for a in attempts if a.success),
            "no_data": not attempts,
        },
        "success_rates": {
            "no_data": not attempts,
            "overall": (
                sum(1 for a in attempts if a.success) / len(attempts) if attempts else None
            ),
            "per_stage": success_rate(attempts, "stage"),
            "per_user": success_rate(attempts, "user"),
        },
    }

    if not study_mode:
        report["secret_metrics"] = {
            "available": False,
            "reason": "study_mode_disabled",
            "status": 409,
        }
        return report

    secrets = secrets_from_events(records)
    if not secrets:
        report["secret_metrics"] = {
            "available": False,
            "reason": "no_secrets_observed",
        }
        return report

    dist = SecretDistribution.from_observations(canonicalize(s) for s in secrets)
    guesswork = expected_guesswork(dist)

    frequencies = element_frequencies(secrets)
    frequency_rows = [
        {"set_id": set_id, "element_id": element_id, "count": count}
        for (set_id, element_id), count in sorted(
            frequencies.items(), key=lambda item: (-item[1], item[0])
        )
    ]

    pairs = co_occurrences(secrets, per_user=True)
    pair_rows: list[dict[str, Any]] = []
    per_set_seen: dict[str, int] = {}
    for (set_id, a, b), count in sorted(pairs.items(), key=lambda item: (-item[1], item[0])):
        if per_set_seen.get(set_id, 0) >= TOP_CO_OCCURRENCES_PER_SET:
            continue
        per_set_seen[set_id] = per_set_seen.get(set_id, 0) + 1
        pair_rows.append(
            {"set_id": set_id, "element_a": a, "element_b": b, "count": count}
        )

    histogram = {kind.value: 0 for kind in PatternKind}
    for secret in secrets:
        pattern = classify_pattern(secret.cells(), rows, cols)
        histogram[pattern.kind.value] += 1

    report["secret_metrics"] = {
        "available": True,
        "total_secrets": dist.total,
        "distinct_secrets": dist.distinct,
        "empirical_entropy_bits": empirical_entropy(dist),
        "entropy_upper_bound_bits": entropy_upper_bound(dist),
        "expected_guesswork": {
            "numerator": guesswork.numerator,
            "denominator": guesswork.denominator,
            "decimal": float(guesswork),
        },
        "work_factor": {_alpha_key(a): work_factor(dist, a) for a in alphas},
        "element_frequencies": frequency_rows,
        "top_co_occurrences": pair_rows,
        "pattern_histogram": histogram,
    }
    return report


def report_json_bytes(report: dict[str, Any]) -> bytes:
    """Canonical serialization; equal reports always serialize to equal bytes."""
    return json.dumps(report, sort_keys=True, separators=(",", ":")).encode("utf-8") + b"\n"


def render_report_text(report: dict[str, Any]) -> str:
    """Human-readable rendering of the same report."""
    lines = [
        f"registrations: {report['registrations']}",
        f"login attempts: {report['attempts']['total']} "
        f"({report['attempts']['successes']} successful)",
    ]
    rates = report["success_rates"]
    if rates["no_data"]:
        lines.append("success rates: no data")
    else:
        lines.append(f"overall success rate: {rates['overall']:.4f}")
        for stage, value in sorted(rates["per_stage"].items()):
            lines.append(f"  stage {stage}: {value:.4f}")
    metrics = report["secret_metrics"]
    if not metrics["available"]:
        lines.append(f"secret metrics: unavailable ({metrics['reason']})")
        return "\n".join(lines)
    guesswork = metrics["expected_guesswork"]
    lines += [
        f"secrets observed: {metrics['total_secrets']} "
        f"({metrics['distinct_secrets']} distinct)",
        f"empirical entropy: {metrics['empirical_entropy_bits']:.4f} bits "
        f"(ceiling {metrics['entropy_upper_bound_bits']:.4f})",
        f"expected guesswork: {guesswork['numerator']}/{guesswork['denominator']} "
        f"= {guesswork['decimal']:.4f}",
    ]
    for alpha, value in sorted(metrics["work_factor"].items(), key=lambda kv: float(kv[0])):
        lines.append(f"work factor W({alpha}) = {value}")
    lines.append("top elements:")
    for row in metrics["element_frequencies"][:10]:
        lines.append(f"  {row['set_id']}:{row['element_id']} x{row['count']}")
    lines.append("pattern histogram:")
    for kind, count in metrics["pattern_histogram"].items():
        lines.append(f"  {kind}: {count}")
    return "\n".join(lines)


def write_csv_tables(report: dict[str, Any], directory: str | Path) -> list[Path]:
    """Emit the element, co-occurrence, and pattern tables as CSV files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    metrics = report["secret_metrics"]
    written: list[Path] = []

    elements_path = directory / "element_frequencies.csv"
    with open(elements_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["element_type", "element", "frequency"])
        if metrics["available"]:
            for row in metrics["element_frequencies"]:
                writer.writerow([row["set_id"], row["element_id"], row["count"]])
    written.append(elements_path)

    pairs_path = directory / "co_occurrences.csv"
    with open(pairs_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["type", "element_a", "element_b", "frequency_users"])
        if metrics["available"]:
            for row in metrics["top_co_occurrences"]:
                writer.writerow([row["set_id"], row["element_a"], row["element_b"], row["count"]])
    written.append(pairs_path)

    patterns_path = directory / "patterns.csv"
    with open(patterns_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pattern_type", "total"])
        if metrics["available"]:
            for kind, count in metrics["pattern_histogram"].items():
                writer.writerow([kind, count])
    written.append(patterns_path)

    return written
