"""Credential lifecycle: registration, salted slow hashing, constant-time verification.

Secrets are canonically encoded and run through scrypt (memory-hard, so the
small empirical guessing cost observed for human-chosen configurations is not
compounded by cheap offline hashing). Only the salted hash is stored unless
the deployment explicitly opts into study mode, which additionally retains
the canonical bytes for choice analytics.

Storage is one JSON-lines file, one record per credential mutation, replayed
into an in-memory index at startup (last write per username wins).
"""

from __future__ import annotations

import hashlib
import hmac
import json
import logging
import secrets
import threading
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterator, Mapping

from .model import (
    PolicyConfig,
    SecretConfiguration,
    ValidationResult,
    canonicalize,
    validate_secret,
)

logger = logging.getLogger(__name__)

SALT_BYTES = 16
HASH_BYTES = 32

# ~100 ms per derivation on commodity hardware; the standard interactive
# scrypt cost. Deployments can tune via the policy's hash_params.
DEFAULT_HASH_PARAMS: Mapping[str, Any] = {
    "name": "scrypt",
    "n": 16384,
    "r": 8,
    "p": 1,
    "dklen": HASH_BYTES,
}

_DUMMY_SALT = b"\x00" * SALT_BYTES

_STORE_VERSION = 1


class KdfParamsError(ValueError):
    """Key-derivation parameters are malformed."""


class DuplicateUserError(ValueError):
    """The username is already registered."""


class InvalidSecretError(ValueError):
    """The secret failed policy validation; carries every violation."""

    def __init__(self, result: ValidationResult):
        super().__init__("; ".join(v.message for v in result.violations))
        self.result = result


@dataclass(frozen=True)
class KdfParams:
    """Validated scrypt cost parameters."""

    n: int
    r: int
    p: int
    dklen: int = HASH_BYTES
    name: str = "scrypt"

    def __post_init__(self) -> None:
        if self.name != "scrypt":
            raise KdfParamsError(f"unsupported KDF {self.name!r}")
        if self.n < 2 or self.n & (self.n - 1):
            raise KdfParamsError(f"scrypt n must be a power of two >= 2, got {self.n}")
        if self.r < 1 or self.p < 1:
            raise KdfParamsError("scrypt r and p must be >= 1")
        if self.dklen != HASH_BYTES:
            raise KdfParamsError(f"derived key length must be {HASH_BYTES} bytes")

    @classmethod
    def from_mapping(cls, params: Mapping[str, Any]) -> "KdfParams":
        if not params:
            params = DEFAULT_HASH_PARAMS
        try:
            return cls(
                n=int(params["n"]),
                r=int(params["r"]),
                p=int(params["p"]),
                dklen=int(params.get("dklen", HASH_BYTES)),
                name=str(params.get("name", "scrypt")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, KdfParamsError):
                raise
            raise KdfParamsError(f"malformed KDF parameters: {params!r}") from exc

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "n": self.n, "r": self.r, "p": self.p, "dklen": self.dklen}


def derive_hash(salt: bytes, canonical: bytes, params: Mapping[str, Any] | KdfParams) -> bytes:
    """Derive the stored hash from (salt, canonical secret bytes).

    Deterministic, 32-byte output. Memory use is 128 * r * n bytes.
    """
    if not isinstance(salt, (bytes, bytearray)) or len(salt) != SALT_BYTES:
        raise ValueError(f"salt must be exactly {SALT_BYTES} bytes")
    kdf = params if isinstance(params, KdfParams) else KdfParams.from_mapping(params)
    return hashlib.scrypt(
        bytes(canonical),
        salt=bytes(salt),
        n=kdf.n,
        r=kdf.r,
        p=kdf.p,
        dklen=kdf.dklen,
        maxmem=256 * kdf.r * (kdf.n + 2),
    )


class FailureReason(str, Enum):
    UNKNOWN_USER = "unknown_user"
    INVALID_SECRET_SHAPE = "invalid_secret_shape"
    MISMATCH = "mismatch"


@dataclass(frozen=True)
class VerificationOutcome:
    accepted: bool
    failure_reason: FailureReason | None = None

    def __post_init__(self) -> None:
        if self.accepted == (self.failure_reason is not None):
            raise ValueError("failure_reason must be present iff not accepted")


@dataclass(frozen=True)
class StoredCredential:
    username: str
    salt: bytes
    hash: bytes
    params: KdfParams
    created_at: float
    plaintext_canonical: bytes | None = None


class CredentialStore:
    """Username -> credential index with JSON-lines persistence.

    Concurrent reads are safe; writes are serialized through a single lock.
    Pass ``path=None`` for a purely in-memory store.
    """

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._index: dict[str, StoredCredential] = {}
        self._salts: set[bytes] = set()
        self._lock = threading.Lock()
        if self._path is not None and self._path.exists():
            self._replay()

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, username: str) -> bool:
        return username in self._index

    def get(self, username: str) -> StoredCredential | None:
        return self._index.get(username)

    def usernames(self) -> tuple[str, ...]:
        return tuple(self._index)

    def register(
        self,
        username: str,
        secret: SecretConfiguration,
        policy: PolicyConfig,
        now: float | None = None,
    ) -> StoredCredential:
        """Create and persist a credential for a new username."""
        result = validate_secret(secret, policy)
        if not result.ok:
            raise InvalidSecretError(result)
        canonical = canonicalize(secret)
        params = KdfParams.from_mapping(policy.hash_params)
        with self._lock:
            if username in self._index:
                raise DuplicateUserError(f"username {username!r} is already registered")
            salt = secrets.token_bytes(SALT_BYTES)
            while salt in self._salts:
                salt = secrets.token_bytes(SALT_BYTES)
            credential = StoredCredential(
                username=username,
                salt=salt,
                hash=derive_hash(salt, canonical, params),
                params=params,
                created_at=time.time() if now is None else now,
                plaintext_canonical=canonical if policy.study_mode else None,
            )
            self._index[username] = credential
            self._salts.add(salt)
            self._persist(credential)
        return credential

    def verify(
        self,
        username: str,
        submitted: SecretConfiguration,
        policy: PolicyConfig,
    ) -> VerificationOutcome:
        """Check a submitted secret; every failure is an outcome, never an exception.

        The hash comparison is constant-time, and an unknown username still
        pays one full derivation so the two failure modes are not
        distinguishable by response timing.
        """
        result = validate_secret(submitted, policy)
        if not result.ok:
            return VerificationOutcome(False, FailureReason.INVALID_SECRET_SHAPE)
        canonical = canonicalize(submitted)
        credential = self._index.get(username)
        if credential is None:
            derive_hash(_DUMMY_SALT, canonical, KdfParams.from_mapping(policy.hash_params))
            return VerificationOutcome(False, FailureReason.UNKNOWN_USER)
        candidate = derive_hash(credential.salt, canonical, credential.params)
        if hmac.compare_digest(candidate, credential.hash):
            return VerificationOutcome(True)
        return VerificationOutcome(False, FailureReason.MISMATCH)

    def _persist(self, credential: StoredCredential) -> None:
        if self._path is None:
            return
        record: dict[str, Any] = {
            "v": _STORE_VERSION,
            "username": credential.username,
            "salt": credential.salt.hex(),
            "hash": credential.hash.hex(),
            "params": credential.params.to_dict(),
            "created_at": credential.created_at,
        }
        if credential.plaintext_canonical is not None:
            record["canonical"] = credential.plaintext_canonical.decode("utf-8")
        self._path.parent.mkdir(parents=True, exist_ok=True)
        with open(self._path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
            fh.flush()

    def _replay(self) -> None:
        assert self._path is not None
        for lineno, record in _read_records(self._path):
            try:
                canonical_text = record.get("canonical")
                credential = StoredCredential(
                    username=record["username"],
                    salt=bytes.fromhex(record["salt"]),
                    hash=bytes.fromhex(record["hash"]),
                    params=KdfParams.from_mapping(record["params"]),
                    created_at=float(record["created_at"]),
                    plaintext_canonical=(
                        canonical_text.encode("utf-8") if canonical_text is not None else None
                    ),
                )
            except (KeyError, ValueError, TypeError) as exc:
                logger.warning("skipping bad credential record at %s:%d: %s", self._path, lineno, exc)
                continue
            self._index[credential.username] = credential
            self._salts.add(credential.salt)


def _read_records(path: Path) -> Iterator[tuple[int, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                logger.warning("skipping corrupt line at %s:%d: %s", path, lineno, exc)
                continue
            if isinstance(record, dict):
                yield lineno, record
