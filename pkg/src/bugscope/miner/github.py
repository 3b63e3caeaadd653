"""Minimal client for REST-v3-style forge APIs (GitHub and compatibles).

Only the endpoints the pipeline needs: issue listing, issue timelines,
comment listings, and pull-request metadata. Pagination is sequential and
rate limits are honored with bounded retries.
"""

from __future__ import annotations

import os
import random
import time

import requests

__all__ = [
    "AuthError",
    "ForgeClient",
    "NetworkError",
    "OfflineError",
    "RateLimited",
]

DEFAULT_TOKEN_ENV = "BUGSCOPE_TOKEN"
_PER_PAGE = 100
_MAX_RETRIES = 5


class AuthError(Exception):
    pass


class RateLimited(Exception):
    pass


class NetworkError(Exception):
    pass


class OfflineError(Exception):
    pass


class ForgeClient:
    def __init__(
        self,
        base_url: str = "https://api.github.com",
        token: str | None = None,
        token_env: str = DEFAULT_TOKEN_ENV,
        session: requests.Session | None = None,
        offline: bool = False,
        sleep=time.sleep,
        clock=time.time,
    ):
        self.base_url = base_url.rstrip("/")
        self.token = token if token is not None else os.environ.get(token_env) or None
        self.session = session if session is not None else requests.Session()
        self.offline = offline
        self._sleep = sleep
        self._clock = clock
        self._rng = random.Random(0)  # jitter only; seeded for reproducible tests

    # ---- transport ----

    def _headers(self) -> dict:
        headers = {"Accept": "application/vnd.github+json"}
        if self.token:
            headers["Authorization"] = f"token {self.token}"
        return headers

    def _get(self, path: str, params: dict | None = None):
        if self.offline:
            raise OfflineError(f"network access disabled, cannot GET {path}")
        url = f"{self.base_url}{path}"
        last_error = None
        for attempt in range(_MAX_RETRIES + 1):
            try:
                resp = self.session.get(
                    url, headers=self._headers(), params=params or {}, timeout=30
                )
            except requests.RequestException as exc:
                last_error = NetworkError(f"GET {path}: {exc}")
                self._sleep(self._backoff(attempt))
                continue
            if resp.status_code == 401:
                raise AuthError(f"GET {path}: authentication rejected (401)")
            if resp.status_code in (403, 429) and self._is_rate_limit(resp):
                last_error = RateLimited(f"GET {path}: rate limited ({resp.status_code})")
                self._sleep(self._retry_delay(resp, attempt))
                continue
            if resp.status_code >= 400:
                raise NetworkError(f"GET {path}: HTTP {resp.status_code}")
            return resp.json()
        raise last_error

    @staticmethod
    def _is_rate_limit(resp) -> bool:
        if resp.headers.get("X-RateLimit-Remaining") == "0":
            return True
        return "Retry-After" in resp.headers or resp.status_code == 429

    def _retry_delay(self, resp, attempt: int) -> float:
        retry_after = resp.headers.get("Retry-After")
        if retry_after is not None:
            try:
                return max(0.0, float(retry_after))
            except ValueError:
                pass
        reset = resp.headers.get("X-RateLimit-Reset")
        if reset is not None:
            try:
                return max(0.0, float(reset) - self._clock())
            except ValueError:
                pass
        return self._backoff(attempt)

    def _backoff(self, attempt: int) -> float:
        return min(2.0**attempt, 60.0) + self._rng.uniform(0.0, 0.5)

    def _paged(self, path: str, params: dict | None = None) -> list:
        out: list = []
        page = 1
        while True:
            batch = self._get(
                path, {**(params or {}), "per_page": _PER_PAGE, "page": page}
            )
            if not isinstance(batch, list):
                raise NetworkError(f"GET {path}: expected a list page")
            out.extend(batch)
            if len(batch) < _PER_PAGE:
                return out
            page += 1

    # ---- endpoints ----

    def list_issues(
        self, owner: str, name: str, labels: list[str] | None = None,
        state: str = "closed", since: str | None = None,
    ) -> list[dict]:
        params: dict = {"state": state, "direction": "asc", "sort": "created"}
        if labels:
            params["labels"] = ",".join(labels)
        if since:
            params["since"] = since
        items = self._paged(f"/repos/{owner}/{name}/issues", params)
        # the issues endpoint interleaves pull requests; drop them
        return [it for it in items if "pull_request" not in it]

    def issue_timeline(self, owner: str, name: str, number: int) -> list[dict]:
        return self._paged(f"/repos/{owner}/{name}/issues/{number}/timeline")

    def issue_comments(self, owner: str, name: str, number: int) -> list[dict]:
        return self._paged(f"/repos/{owner}/{name}/issues/{number}/comments")

    def get_pull(self, owner: str, name: str, number: int) -> dict:
        return self._get(f"/repos/{owner}/{name}/pulls/{number}")

    def pull_commits(self, owner: str, name: str, number: int) -> list[dict]:
        return self._paged(f"/repos/{owner}/{name}/pulls/{number}/commits")

    def pull_review_comments(self, owner: str, name: str, number: int) -> list[dict]:
        return self._paged(f"/repos/{owner}/{name}/pulls/{number}/comments")
