"""Conformance checks for any embedding endpoint speaking the /embed contract.

Runnable against a live service of any implementation:

    python -m destructure.conformance http://127.0.0.1:8400

The not-ready path (503 before the model loads) cannot be probed from outside
a healthy server and is left to the service's own tests.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import requests

from .embeddings import CONNECT_TIMEOUT, REQUEST_TIMEOUT

BATCH_LIMIT = 256

_SAMPLE_TEXTS = [
    f"sample sentence number {i} about subject {i % 7}" for i in range(100)
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _post(session: requests.Session, endpoint: str, texts) -> requests.Response:
    return session.post(
        f"{endpoint}/embed",
        json={"texts": texts},
        timeout=(CONNECT_TIMEOUT, REQUEST_TIMEOUT),
    )


def run_conformance(
    endpoint: str,
    session: requests.Session | None = None,
    batch_limit: int = BATCH_LIMIT,
) -> list[CheckResult]:
    """Run every check; never raises on a failed check, only on transport setup."""
    endpoint = endpoint.rstrip("/")
    session = session or requests.Session()
    results: list[CheckResult] = []

    def check(name: str, passed: bool, detail: str = "") -> None:
        results.append(CheckResult(name, passed, detail))

    # health
    resp = session.get(f"{endpoint}/health", timeout=(CONNECT_TIMEOUT, REQUEST_TIMEOUT))
    body = resp.json() if resp.status_code == 200 else {}
    check(
        "health_ok",
        resp.status_code == 200 and body.get("status") == "ok" and "model" in body,
        f"status={resp.status_code} body={body}",
    )

    # basic shape: count, advertised dim, response order
    texts = ["alpha beta", "gamma delta", "alpha beta"]
    resp = _post(session, endpoint, texts)
    ok = resp.status_code == 200
    vectors, dim = [], 0
    if ok:
        payload = resp.json()
        vectors, dim = payload.get("vectors", []), payload.get("dim", 0)
        ok = (
            len(vectors) == len(texts)
            and dim > 0
            and all(len(v) == dim for v in vectors)
            and all(math.isfinite(x) for v in vectors for x in v)
        )
    check("embed_shape", ok, f"status={resp.status_code} dim={dim}")

    # determinism on repeated text, within and across requests
    same_within = bool(vectors) and vectors[0] == vectors[2]
    resp2 = _post(session, endpoint, ["alpha beta"])
    same_across = (
        resp2.status_code == 200 and resp2.json()["vectors"][0] == vectors[0]
    )
    check("determinism", same_within and same_across)

    # order preservation: batched result equals per-text results, position by position
    singles = []
    for text in texts[:2]:
        r = _post(session, endpoint, [text])
        singles.append(r.json()["vectors"][0] if r.status_code == 200 else None)
    check(
        "order_preservation",
        bool(vectors) and vectors[0] == singles[0] and vectors[1] == singles[1],
    )

    # unit norms over a 100-sentence sample
    resp = _post(session, endpoint, _SAMPLE_TEXTS)
    norm_ok = resp.status_code == 200
    worst = 0.0
    if norm_ok:
        for vec in resp.json()["vectors"]:
            worst = max(worst, abs(math.sqrt(sum(x * x for x in vec)) - 1.0))
        norm_ok = worst <= 1e-6
    check("unit_norms", norm_ok, f"worst deviation {worst:.2e}")

    # error paths
    resp = _post(session, endpoint, [])
    check("empty_list_400", resp.status_code == 400, f"status={resp.status_code}")

    resp = _post(session, endpoint, ["ok", ""])
    check("empty_entry_400", resp.status_code == 400, f"status={resp.status_code}")

    resp = _post(session, endpoint, ["x"] * (batch_limit + 1))
    check("oversize_413", resp.status_code == 413, f"status={resp.status_code}")

    return results


def assert_conformance(endpoint: str, session: requests.Session | None = None) -> None:
    """Raise AssertionError listing every failed check (for test suites)."""
    failed = [r for r in run_conformance(endpoint, session) if not r.passed]
    if failed:
        details = "; ".join(f"{r.name} ({r.detail})" for r in failed)
        raise AssertionError(f"endpoint {endpoint} failed conformance: {details}")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m destructure.conformance ENDPOINT", file=sys.stderr)
        return 2
    results = run_conformance(argv[0])
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} {r.detail}".rstrip())
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
