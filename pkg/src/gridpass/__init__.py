"""Grid placement graphical authentication: model, counting, service, analytics."""

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
from .challenge import Challenge, ChallengeRegistry, InvalidTokenError, generate_challenge
from .counting import SpaceConfig, SpaceResult, arrangements, brute_force_space, total_space, valid_labelings
from .credentials import (
    CredentialStore,
    DuplicateUserError,
    FailureReason,
    InvalidSecretError,
    KdfParams,
    StoredCredential,
    VerificationOutcome,
    derive_hash,
)
from .model import (
    Element,
    ElementSet,
    Placement,
    PolicyConfig,
    PolicyError,
    SecretConfiguration,
    SecretEncodingError,
    ValidationResult,
    Violation,
    canonicalize,
    load_policy,
    parse_canonical,
    policy_from_dict,
    policy_to_dict,
    save_policy,
    validate_secret,
)
from .patterns import PatternClass, PatternKind, classify_pattern
from .service import ServiceConfig, create_app

__version__ = "0.1.0"

__all__ = [
    "AttemptRecord",
    "Challenge",
    "ChallengeRegistry",
    "CredentialStore",
    "DuplicateUserError",
    "Element",
    "ElementSet",
    "FailureReason",
    "InvalidSecretError",
    "InvalidTokenError",
    "KdfParams",
    "PatternClass",
    "PatternKind",
    "Placement",
    "PolicyConfig",
    "PolicyError",
    "SecretConfiguration",
    "SecretDistribution",
    "SecretEncodingError",
    "ServiceConfig",
    "SpaceConfig",
    "SpaceResult",
    "Stage",
    "StoredCredential",
    "ValidationResult",
    "VerificationOutcome",
    "Violation",
    "arrangements",
    "brute_force_space",
    "canonicalize",
    "classify_pattern",
    "co_occurrences",
    "create_app",
    "derive_hash",
    "element_frequencies",
    "empirical_entropy",
    "entropy_upper_bound",
    "expected_guesswork",
    "generate_challenge",
    "load_policy",
    "parse_canonical",
    "policy_from_dict",
    "policy_to_dict",
    "save_policy",
    "success_rate",
    "total_space",
    "valid_labelings",
    "validate_secret",
    "work_factor",
]
