"""Register a secret, shuffle the palettes, and verify submissions in-process.

No HTTP here: this is the model, credential store, and challenge layout
working directly, the same objects the service wires together.
"""

import random

from gridpass.challenge import generate_challenge
from gridpass.credentials import CredentialStore
from gridpass.model import Placement, SecretConfiguration, load_policy, validate_secret

policy = load_policy("policies/prototype.json")
print(f"policy: {policy.rows}x{policy.cols} grid, sets "
      f"{[s.set_id for s in policy.sets]} sized {list(policy.set_sizes)}, "
      f"k in [{policy.k_min}, {policy.k_max}]")

secret = SecretConfiguration(
    [
        Placement(0, "colors", "black"),
        Placement(5, "icons", "fire"),
        Placement(10, "shapes", "square"),
    ]
)
print("\nsecret placements:", sorted((p.cell, p.element_id) for p in secret.placements))
print("validates:", validate_secret(secret, policy).ok)

store = CredentialStore()  # in-memory; the service persists to JSON lines
credential = store.register("alice", secret, policy)
print(f"registered alice: salt={credential.salt.hex()[:16]}..., "
      f"hash={credential.hash.hex()[:16]}...")

print("\n=== Each login shows palettes in a fresh within-set order ===")
for attempt in range(2):
    challenge = generate_challenge("alice", policy, random.SystemRandom())
    colors = challenge.per_set_order["colors"]
    print(f"attempt {attempt + 1}: token={challenge.token[:8]}..., "
          f"colors start {colors[:4]}")

print("\n=== Verification consumes only the configuration ===")
cases = {
    "identical secret": secret,
    "same placements, different entry order": SecretConfiguration(
        reversed(sorted(secret.placements))
    ),
    "black moved one cell right": SecretConfiguration(
        [
            Placement(1, "colors", "black"),
            Placement(5, "icons", "fire"),
            Placement(10, "shapes", "square"),
        ]
    ),
    "fire swapped for water_droplet": SecretConfiguration(
        [
            Placement(0, "colors", "black"),
            Placement(5, "icons", "water_droplet"),
            Placement(10, "shapes", "square"),
        ]
    ),
}
for label, submitted in cases.items():
    outcome = store.verify("alice", submitted, policy)
    reason = f" ({outcome.failure_reason.value})" if outcome.failure_reason else ""
    print(f"  {label:<42} -> {'accepted' if outcome.accepted else 'rejected'}{reason}")

outcome = store.verify("mallory", secret, policy)
print(f"  {'unknown username, correct-shaped secret':<42} -> "
      f"{'accepted' if outcome.accepted else 'rejected'} "
      f"(externally indistinguishable from a mismatch)")
