"""The full HTTP flow against a live, locally bound service instance.

Starts the service in a background thread on an ephemeral port, registers a
user, fetches a challenge, logs in (wrong then right), and pulls the
analytics report — then restarts on the same data directory to show the
event log replays to identical state.
"""

import dataclasses
import json
import tempfile
import threading
import time
import urllib.request
from pathlib import Path

import uvicorn

from gridpass.model import load_policy, save_policy
from gridpass.service import ServiceConfig, create_app

PLACEMENTS = [
    {"cell": 0, "set_id": "colors", "element_id": "black"},
    {"cell": 5, "set_id": "icons", "element_id": "fire"},
    {"cell": 10, "set_id": "shapes", "element_id": "square"},
]


def post(url, body):
    request = urllib.request.Request(
        url,
        data=json.dumps(body).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(request, timeout=5) as response:
            return response.status, json.loads(response.read() or b"null")
    except urllib.error.HTTPError as error:
        return error.code, json.loads(error.read() or b"null")


def get(url, token=None):
    headers = {"Authorization": f"Bearer {token}"} if token else {}
    with urllib.request.urlopen(
        urllib.request.Request(url, headers=headers), timeout=5
    ) as response:
        return json.loads(response.read())


workdir = Path(tempfile.mkdtemp(prefix="gridpass-demo-"))
policy = dataclasses.replace(
    load_policy("policies/prototype.json"),
    hash_params={"name": "scrypt", "n": 4096, "r": 8, "p": 1, "dklen": 32},
)
save_policy(policy, workdir / "policy.json")
config = ServiceConfig(
    policy_path=workdir / "policy.json",
    data_dir=workdir / "data",
    admin_token="demo-admin",
)

server = uvicorn.Server(
    uvicorn.Config(create_app(config), host="127.0.0.1", port=0, log_level="error")
)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)
port = server.servers[0].sockets[0].getsockname()[1]
base = f"http://127.0.0.1:{port}"
print(f"service listening on {base} (data under {workdir})")

info = get(f"{base}/api/config")
print(f"\n/api/config: {info['grid']['rows']}x{info['grid']['cols']} grid, "
      f"{len(info['sets'])} sets, entropy {info['entropy_bits']:.2f} bits")

status, _ = post(f"{base}/api/register", {"username": "alice", "placements": PLACEMENTS})
print(f"register alice -> {status}")

status, challenge = post(f"{base}/api/challenge", {"username": "alice"})
print(f"challenge -> {status}, token {challenge['token'][:8]}..., "
      f"colors palette starts {challenge['per_set_order']['colors'][:3]}")

wrong = [dict(p) for p in PLACEMENTS]
wrong[0]["cell"] = 3
status, outcome = post(
    f"{base}/api/login",
    {"username": "alice", "token": challenge["token"], "placements": wrong},
)
print(f"login with black on the wrong cell -> {status} {outcome}")

status, challenge = post(f"{base}/api/challenge", {"username": "alice"})
status, outcome = post(
    f"{base}/api/login",
    {"username": "alice", "token": challenge["token"], "placements": PLACEMENTS},
)
print(f"login with the registered configuration -> {status} {outcome}")

report = get(f"{base}/api/analytics", token="demo-admin")
print(f"\nanalytics: {report['registrations']} registration(s), "
      f"{report['attempts']['total']} attempt(s), "
      f"overall success rate {report['success_rates']['overall']}")

server.should_exit = True
thread.join(timeout=10)

print("\nreplaying the event log offline...")
from gridpass.events import EventLog
from gridpass.reporting import build_report, report_json_bytes
from gridpass.service import EVENTS_FILENAME

records = EventLog(config.data_dir / EVENTS_FILENAME).records()
rebuilt = build_report(records, rows=4, cols=4, study_mode=True)
print("replayed report identical:",
      json.loads(report_json_bytes(rebuilt)) == report)
