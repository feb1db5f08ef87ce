"""HTTP JSON API tying the model, credential store, challenge layout, and analytics together.

Design points:

* All persistence is append-only JSON lines under one data directory
  (``credentials.jsonl``, ``events.jsonl``); restarting on the same directory
  reconstructs identical state, including byte-identical analytics output.
* Authentication failures are uniform: unknown usernames and wrong secrets
  produce the same status, body shape, and (thanks to a dummy derivation)
  comparable response time. Challenges are issued for unknown usernames too.
* Challenge tokens are single-use and expire; login rates are limited per
  username in fixed one-minute windows.
"""

from __future__ import annotations

import json
import random
import secrets as secrets_module
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Header, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .challenge import (
    DEFAULT_TTL_SECONDS,
    ChallengeRegistry,
    InvalidTokenError,
    generate_challenge,
)
from .counting import SpaceConfig, total_space
from .credentials import CredentialStore, DuplicateUserError, InvalidSecretError
from .events import (
    KIND_CHALLENGE_ISSUED,
    KIND_LOGIN_ATTEMPT,
    KIND_REGISTERED,
    EventLog,
)
from .model import Placement, PolicyConfig, SecretConfiguration, canonicalize, load_policy
from .analytics import Stage
from .reporting import DEFAULT_ALPHAS, build_report, report_json_bytes


META_FILENAME = "meta.json"
CREDENTIALS_FILENAME = "credentials.jsonl"
EVENTS_FILENAME = "events.jsonl"

# Attempt-age windows (days since registration) mapping to the scheduled
# login stages at 1, 10, and 28 days.
_STAGE_WINDOWS = ((5.0, Stage.LOGIN_1), (19.0, Stage.LOGIN_10), (56.0, Stage.LOGIN_28))


class ServiceConfigError(ValueError):
    """The service configuration file is missing or inconsistent."""


@dataclass
class ServiceConfig:
    policy_path: Path
    data_dir: Path
    bind: str = "127.0.0.1"
    port: int = 8000
    challenge_ttl_seconds: float = DEFAULT_TTL_SECONDS
    rate_limit_per_minute: int = 30
    study_mode: bool | None = None  # None: use the policy's flag
    admin_token: str | None = None
    cors_origins: tuple[str, ...] = ("*",)
    shuffle_registration_palettes: bool = True

    def __post_init__(self) -> None:
        self.policy_path = Path(self.policy_path)
        self.data_dir = Path(self.data_dir)
        if self.challenge_ttl_seconds <= 0:
            raise ServiceConfigError("challenge_ttl_seconds must be positive")
        if self.rate_limit_per_minute < 1:
            raise ServiceConfigError("rate_limit_per_minute must be >= 1")

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ServiceConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ServiceConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ServiceConfigError(f"config file {path} must hold a JSON object")
        known = {
            "policy_path",
            "data_dir",
            "bind",
            "port",
            "challenge_ttl_seconds",
            "rate_limit_per_minute",
            "study_mode",
            "admin_token",
            "cors_origins",
            "shuffle_registration_palettes",
        }
        unknown = set(doc) - known
        if unknown:
            raise ServiceConfigError(f"unknown config fields: {sorted(unknown)}")
        if "policy_path" not in doc or "data_dir" not in doc:
            raise ServiceConfigError("config needs policy_path and data_dir")
        base = path.parent
        try:
            config = cls(
                policy_path=_resolve(base, doc["policy_path"]),
                data_dir=_resolve(base, doc["data_dir"]),
                bind=str(doc.get("bind", "127.0.0.1")),
                port=int(doc.get("port", 8000)),
                challenge_ttl_seconds=float(doc.get("challenge_ttl_seconds", DEFAULT_TTL_SECONDS)),
                rate_limit_per_minute=int(doc.get("rate_limit_per_minute", 30)),
                study_mode=doc.get("study_mode"),
                admin_token=doc.get("admin_token"),
                cors_origins=tuple(doc.get("cors_origins", ("*",))),
                shuffle_registration_palettes=bool(doc.get("shuffle_registration_palettes", True)),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ServiceConfigError):
                raise
            raise ServiceConfigError(f"bad config value: {exc}") from exc
        if not config.policy_path.exists():
            raise ServiceConfigError(f"policy file not found: {config.policy_path}")
        return config


def _resolve(base: Path, value: Any) -> Path:
    p = Path(str(value))
    return p if p.is_absolute() else base / p


class RateLimiter:
    """Fixed-window counter per username; safe under concurrent requests."""

    def __init__(self, limit_per_minute: int):
        self.limit = limit_per_minute
        self._windows: dict[str, tuple[int, int]] = {}
        self._lock = threading.Lock()

    def allow(self, username: str, now: float | None = None) -> bool:
        now = time.time() if now is None else now
        window = int(now // 60)
        with self._lock:
            current_window, count = self._windows.get(username, (window, 0))
            if current_window != window:
                count = 0
            if count >= self.limit:
                self._windows[username] = (window, count)
                return False
            self._windows[username] = (window, count + 1)
            return True


class PlacementIn(BaseModel):
    cell: int
    set_id: str = Field(min_length=1, max_length=64)
    element_id: str = Field(min_length=1, max_length=64)


class RegisterIn(BaseModel):
    username: str = Field(min_length=1, max_length=128)
    placements: list[PlacementIn]


class ChallengeIn(BaseModel):
    username: str = Field(min_length=1, max_length=128)


class LoginIn(BaseModel):
    username: str = Field(min_length=1, max_length=128)
    token: str = Field(min_length=1, max_length=128)
    placements: list[PlacementIn]
    client_duration_seconds: float | None = None


def _to_secret(placements: list[PlacementIn]) -> SecretConfiguration:
    return SecretConfiguration(
        Placement(p.cell, p.set_id, p.element_id) for p in placements
    )


def _json_response(payload: dict[str, Any], status_code: int = 200) -> Response:
    return Response(
        content=json.dumps(payload, sort_keys=True) + "\n",
        status_code=status_code,
        media_type="application/json",
    )


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the service application around one policy and one data directory."""
    policy = load_policy(config.policy_path)
    if config.study_mode is not None:
        policy = policy.with_study_mode(bool(config.study_mode))

    config.data_dir.mkdir(parents=True, exist_ok=True)
    _write_meta(config, policy)

    store = CredentialStore(config.data_dir / CREDENTIALS_FILENAME)
    events = EventLog(config.data_dir / EVENTS_FILENAME)
    registry = ChallengeRegistry()
    limiter = RateLimiter(config.rate_limit_per_minute)
    rng = random.SystemRandom()
    space = total_space(SpaceConfig.from_policy(policy))

    app = FastAPI(title="grid placement authentication service")
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(RequestValidationError)
    async def _bad_request(_request: Request, _exc: RequestValidationError) -> Response:
        return _json_response({"error": "invalid_request"}, status_code=400)

    @app.post("/api/register")
    def register(body: RegisterIn) -> Response:
        secret = _to_secret(body.placements)
        try:
            store.register(body.username, secret, policy)
        except InvalidSecretError as exc:
            return _json_response(
                {
                    "error": "invalid_secret",
                    "violations": [
                        {"code": v.code, "message": v.message}
                        for v in exc.result.violations
                    ],
                },
                status_code=400,
            )
        except DuplicateUserError:
            return _json_response({"error": "username_taken"}, status_code=409)
        payload: dict[str, Any] = {"username": body.username, "k": secret.k}
        if policy.study_mode:
            payload["canonical"] = canonicalize(secret).decode("utf-8")
        events.append(KIND_REGISTERED, payload)
        return Response(status_code=201)

    @app.post("/api/challenge")
    def challenge(body: ChallengeIn) -> Response:
        if not limiter.allow(body.username):
            return _json_response({"error": "rate_limited"}, status_code=429)
        issued = generate_challenge(
            body.username, policy, rng, ttl_seconds=config.challenge_ttl_seconds
        )
        registry.issue(issued)
        events.append(
            KIND_CHALLENGE_ISSUED,
            {
                "username": body.username,
                "token": issued.token,
                "expires_at": issued.expires_at,
            },
        )
        return _json_response(
            {
                "token": issued.token,
                "per_set_order": {k: list(v) for k, v in issued.per_set_order.items()},
                "grid": {"rows": policy.rows, "cols": policy.cols},
                "k_min": policy.k_min,
                "k_max": policy.k_max,
            }
        )

    @app.post("/api/login")
    def login(body: LoginIn) -> Response:
        if not limiter.allow(body.username):
            return _json_response({"error": "rate_limited"}, status_code=429)
        try:
            issued = registry.consume(body.token)
        except InvalidTokenError:
            return _json_response({"error": "invalid_token"}, status_code=400)
        if issued.username != body.username:
            return _json_response({"error": "invalid_token"}, status_code=400)
        submitted = _to_secret(body.placements)
        outcome = store.verify(body.username, submitted, policy)
        now = time.time()
        credential = store.get(body.username)
        events.append(
            KIND_LOGIN_ATTEMPT,
            {
                "username": body.username,
                "token": body.token,
                "success": outcome.accepted,
                "reason": outcome.failure_reason.value if outcome.failure_reason else None,
                "duration_seconds": max(0.0, now - issued.issued_at),
                "client_duration_seconds": body.client_duration_seconds,
                "stage": _stage_for(
                    credential.created_at if credential else None, now
                ).value,
            },
            timestamp=now,
        )
        return _json_response({"success": outcome.accepted})

    @app.get("/api/config")
    def get_config() -> Response:
        return _json_response(
            {
                "grid": {"rows": policy.rows, "cols": policy.cols},
                "grid_cells": policy.grid_cells,
                "k_min": policy.k_min,
                "k_max": policy.k_max,
                "study_mode": policy.study_mode,
                "shuffle_registration_palettes": config.shuffle_registration_palettes,
                "entropy_bits": space.entropy_bits,
                "total_space": str(space.total),
                "sets": [
                    {
                        "set_id": s.set_id,
                        "name": s.name,
                        "size": s.size,
                        "elements": [
                            {
                                "element_id": e.element_id,
                                "label": e.label,
                                "render_hint": e.render_hint,
                            }
                            for e in s.elements
                        ],
                    }
                    for s in policy.sets
                ],
            }
        )

    @app.get("/api/analytics")
    def analytics(
        authorization: str | None = Header(default=None),
        require_secret_metrics: bool = Query(default=False),
    ) -> Response:
        if not _admin_authorized(authorization, config.admin_token):
            return _json_response({"error": "unauthorized"}, status_code=401)
        if require_secret_metrics and not policy.study_mode:
            return _json_response(
                {"error": "secret_metrics_unavailable", "reason": "study_mode_disabled"},
                status_code=409,
            )
        report = build_report(
            events.records(),
            rows=policy.rows,
            cols=policy.cols,
            study_mode=policy.study_mode,
            alphas=DEFAULT_ALPHAS,
        )
        return Response(content=report_json_bytes(report), media_type="application/json")

    return app


def _admin_authorized(header: str | None, admin_token: str | None) -> bool:
    if not admin_token or not header:
        return False
    scheme, _, token = header.partition(" ")
    if scheme.lower() != "bearer":
        return False
    return secrets_module.compare_digest(token.strip(), admin_token)


def _stage_for(registered_at: float | None, now: float) -> Stage:
    if registered_at is None:
        return Stage.OTHER
    days = (now - registered_at) / 86400.0
    if days < 0:
        return Stage.OTHER
    for upper, stage in _STAGE_WINDOWS:
        if days < upper:
            return stage
    return Stage.OTHER


def _write_meta(config: ServiceConfig, policy: PolicyConfig) -> None:
    """Sidecar consumed by offline analysis so it reports exactly like the service."""
    meta = {
        "v": 1,
        "rows": policy.rows,
        "cols": policy.cols,
        "study_mode": policy.study_mode,
        "alphas": list(DEFAULT_ALPHAS),
    }
    (config.data_dir / META_FILENAME).write_text(
        json.dumps(meta, sort_keys=True) + "\n", encoding="utf-8"
    )
