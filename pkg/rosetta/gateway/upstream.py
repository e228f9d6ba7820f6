"""aiohttp client for the provider a route forwards to"""

from __future__ import annotations

import asyncio
import json
import logging
from contextlib import asynccontextmanager
from typing import Any, AsyncIterator, Dict, Optional, Tuple

import aiohttp

from rosetta.config.defaults import AUTH_HEADERS, EXTRA_UPSTREAM_HEADERS, UPSTREAM_PATHS
from rosetta.gateway.config import RouteConfig, TimeoutConfig
from rosetta.ir.types import ProviderFormat

logger = logging.getLogger(__name__)


class UpstreamError(Exception):
    """The upstream answered with an error status or could not be reached."""

    def __init__(self, message: str, status: Optional[int] = None, body: Any = None):
        super().__init__(message)
        self.status = status
        self.body = body

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"error": "upstream_error", "message": str(self)}
        if self.status is not None:
            out["upstream_status"] = self.status
        if self.body is not None:
            out["upstream_body"] = self.body
        return out


def upstream_url(route: RouteConfig, model: str, streamed: bool) -> str:
    fmt = route.upstream_format.value
    key = "google_stream" if streamed and route.upstream_format == ProviderFormat.GOOGLE else fmt
    return route.upstream_base_url + UPSTREAM_PATHS[key].format(model=model)


def upstream_headers(route: RouteConfig, streamed: bool) -> Dict[str, str]:
    fmt = route.upstream_format.value
    headers = {"Content-Type": "application/json", **EXTRA_UPSTREAM_HEADERS.get(fmt, {})}
    if streamed:
        headers["Accept"] = "text/event-stream"
    key = route.api_key()
    if key:
        name, template = AUTH_HEADERS[fmt]
        headers[name] = template.format(key=key)
    elif route.api_key_env:
        logger.warning("api key variable %s is not set; forwarding without credentials", route.api_key_env)
    return headers


async def _error_body(response: aiohttp.ClientResponse) -> Any:
    text = await response.text(errors="replace")
    try:
        return json.loads(text)
    except ValueError:
        return text


class UpstreamClient:
    def __init__(self, timeouts: Optional[TimeoutConfig] = None):
        self.timeouts = timeouts or TimeoutConfig()
        self.session: Optional[aiohttp.ClientSession] = None

    async def ensure_session(self):
        """Ensure aiohttp session exists"""
        if self.session is None or self.session.closed:
            self.session = aiohttp.ClientSession()

    async def close(self):
        if self.session is not None and not self.session.closed:
            await self.session.close()

    def _timeout(self, streamed: bool) -> aiohttp.ClientTimeout:
        read = self.timeouts.stream_idle_s if streamed else self.timeouts.read_ms / 1000
        return aiohttp.ClientTimeout(total=None, connect=self.timeouts.connect_ms / 1000, sock_read=read)

    async def post_json(self, route: RouteConfig, body: Dict[str, Any], model: str) -> Tuple[int, Any]:
        """Non-streamed call; returns the upstream status and parsed JSON body."""
        await self.ensure_session()
        url = upstream_url(route, model, streamed=False)
        try:
            async with self.session.post(
                url, json=body, headers=upstream_headers(route, False), timeout=self._timeout(False),
            ) as response:
                if response.status >= 400:
                    raise UpstreamError(f"upstream returned {response.status}", response.status, await _error_body(response))
                try:
                    return response.status, await response.json(content_type=None)
                except ValueError:
                    raise UpstreamError("upstream body is not JSON", response.status, await response.text()) from None
        except aiohttp.ClientError as e:
            raise UpstreamError(f"upstream request failed: {e.__class__.__name__}") from e
        except asyncio.TimeoutError as e:
            raise UpstreamError("upstream request timed out") from e

    @asynccontextmanager
    async def stream(self, route: RouteConfig, body: Dict[str, Any], model: str) -> AsyncIterator[aiohttp.ClientResponse]:
        """Streamed call; yields the open response once its status is known to be good."""
        await self.ensure_session()
        url = upstream_url(route, model, streamed=True)
        try:
            response = await self.session.post(
                url, json=body, headers=upstream_headers(route, True), timeout=self._timeout(True),
            )
        except aiohttp.ClientError as e:
            raise UpstreamError(f"upstream request failed: {e.__class__.__name__}") from e
        except asyncio.TimeoutError as e:
            raise UpstreamError("upstream request timed out") from e
        try:
            if response.status >= 400:
                raise UpstreamError(f"upstream returned {response.status}", response.status, await _error_body(response))
            yield response
        finally:
            response.release()


__all__ = ["UpstreamClient", "UpstreamError", "upstream_headers", "upstream_url"]
