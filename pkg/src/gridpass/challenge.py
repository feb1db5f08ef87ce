"""Per-attempt palette layout: within-set shuffling behind single-use tokens.

Only the display order of elements inside each palette changes between
attempts; elements never move between sets and grid cells are never shuffled.
The shuffle is pure presentation: verification consumes the submitted
configuration alone, so no layout information ever participates in matching.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass
from typing import Mapping, Protocol

from .model import PolicyConfig

DEFAULT_TTL_SECONDS = 300.0


class RandomSource(Protocol):
    """Anything with a Fisher-Yates shuffle: random.SystemRandom in production,
    a seeded random.Random in tests."""

    def shuffle(self, x: list) -> None: ...


class InvalidTokenError(ValueError):
    """Token unknown, expired, or already consumed."""


@dataclass(frozen=True)
class Challenge:
    """One login attempt's layout: a fresh token plus per-set display orders."""

    token: str
    username: str
    per_set_order: Mapping[str, tuple[str, ...]]
    issued_at: float
    expires_at: float

    def is_expired(self, now: float | None = None) -> bool:
        return (time.time() if now is None else now) >= self.expires_at


def generate_challenge(
    username: str,
    policy: PolicyConfig,
    rng: RandomSource,
    ttl_seconds: float = DEFAULT_TTL_SECONDS,
    now: float | None = None,
) -> Challenge:
    """Shuffle each set's element order independently and mint a fresh token.

    The token always comes from the process CSPRNG; only the permutations are
    driven by ``rng`` so tests can pin them with a seed.
    """
    per_set_order: dict[str, tuple[str, ...]] = {}
    for element_set in policy.sets:
        order = list(element_set.element_ids)
        rng.shuffle(order)
        per_set_order[element_set.set_id] = tuple(order)
    issued_at = time.time() if now is None else now
    return Challenge(
        token=secrets.token_urlsafe(16),
        username=username,
        per_set_order=per_set_order,
        issued_at=issued_at,
        expires_at=issued_at + ttl_seconds,
    )


class ChallengeRegistry:
    """Issued-but-unconsumed challenges, keyed by token.

    A token is consumed exactly once even under concurrent submissions;
    issuance and consumption share one lock.
    """

    def __init__(self) -> None:
        self._live: dict[str, Challenge] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._live)

    def issue(self, challenge: Challenge, now: float | None = None) -> None:
        now = time.time() if now is None else now
        with self._lock:
            expired = [t for t, c in self._live.items() if c.is_expired(now)]
            for token in expired:
                del self._live[token]
            self._live[challenge.token] = challenge

    def consume(self, token: str, now: float | None = None) -> Challenge:
        """Atomically claim a token; raises if it is unknown, reused, or expired."""
        with self._lock:
            challenge = self._live.pop(token, None)
        if challenge is None:
            raise InvalidTokenError("token is unknown or already used")
        if challenge.is_expired(now):
            raise InvalidTokenError("token has expired")
        return challenge
