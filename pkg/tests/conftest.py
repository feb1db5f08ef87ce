"""Shared fixtures: policies, secret generators, fixture logs."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from gridpass.model import (
    Element,
    ElementSet,
    Placement,
    PolicyConfig,
    SecretConfiguration,
    load_policy,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
PROTOTYPE_POLICY_PATH = REPO_ROOT / "policies" / "prototype.json"

# Fast scrypt parameters for tests; production cost lives in the policy file.
CHEAP_HASH_PARAMS = {"name": "scrypt", "n": 2, "r": 8, "p": 1, "dklen": 32}


@pytest.fixture(scope="session")
def prototype_policy() -> PolicyConfig:
    return load_policy(PROTOTYPE_POLICY_PATH)


@pytest.fixture(scope="session")
def fast_prototype_policy(prototype_policy: PolicyConfig) -> PolicyConfig:
    """The shipped prototype structure with test-speed hashing."""
    import dataclasses

    return dataclasses.replace(prototype_policy, hash_params=CHEAP_HASH_PARAMS)


def build_tiny_policy(**overrides) -> PolicyConfig:
    def element_set(set_id: str, name: str, ids: list[str]) -> ElementSet:
        return ElementSet(
            set_id=set_id,
            name=name,
            elements=tuple(
                Element(element_id=i, set_id=set_id, label=i.title()) for i in ids
            ),
        )

    kwargs = dict(
        rows=3,
        cols=3,
        sets=(
            element_set("colors", "Colors", ["red", "blue"]),
            element_set("icons", "Icons", ["fire", "star"]),
            element_set("shapes", "Shapes", ["square", "circle"]),
        ),
        k_min=3,
        k_max=5,
        hash_params=CHEAP_HASH_PARAMS,
        study_mode=True,
    )
    kwargs.update(overrides)
    return PolicyConfig(**kwargs)


@pytest.fixture()
def tiny_policy() -> PolicyConfig:
    return build_tiny_policy()


def random_valid_secret(
    policy: PolicyConfig, rng: random.Random, k: int | None = None
) -> SecretConfiguration:
    """Uniformly messy but always-valid secret under the policy."""
    if k is None:
        k = rng.randint(policy.k_min, policy.k_max)
    cells = rng.sample(range(policy.grid_cells), k)
    pool = [
        (s.set_id, e.element_id) for s in policy.sets for e in s.elements
    ]
    # Cover every set once, then fill the rest from the whole pool.
    choices = [
        (s.set_id, rng.choice(s.elements).element_id) for s in policy.sets
    ]
    while len(choices) < k:
        choices.append(rng.choice(pool))
    rng.shuffle(choices)
    return SecretConfiguration(
        Placement(cell, set_id, element_id)
        for cell, (set_id, element_id) in zip(cells, choices)
    )


def paper_distribution_counts() -> dict[bytes, int]:
    """The observed study shape: one secret seen twice, 57 seen once."""
    counts = {b"repeated-secret": 2}
    for i in range(57):
        counts[b"unique-secret-%02d" % i] = 1
    return counts
