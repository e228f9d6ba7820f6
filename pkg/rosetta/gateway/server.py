"""aiohttp.web translation gateway.

Each configured route accepts requests in one client format (or detects
it), converts them to the route's upstream format, forwards them, and
converts the answer back. Streamed answers are relayed one SSE frame at a
time; nothing waits for the complete upstream response.
"""

from __future__ import annotations

import asyncio
import json
import logging
import time
import uuid
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import aiohttp
from aiohttp import web

from rosetta.config.defaults import WARNINGS_HEADER
from rosetta.converters.errors import MalformedInput, RosettaError, UnknownFormat
from rosetta.converters.registry import ConverterRegistry, StreamTranslator, default_registry
from rosetta.detect import detect_format
from rosetta.gateway.config import GatewayConfig, RouteConfig
from rosetta.gateway.logs import configure_logging
from rosetta.gateway.upstream import UpstreamClient, UpstreamError
from rosetta.ir.types import ProviderFormat
from rosetta.sse import SseParser, encode_payload, frame_payload

logger = logging.getLogger(__name__)

GOOGLE_STREAM_METHOD = "streamGenerateContent"
GATEWAY_KEY = web.AppKey("gateway", object)


@dataclass
class RequestLog:
    request_id: str
    route: str
    started: float = field(default_factory=time.perf_counter)
    client_format: Optional[str] = None
    upstream_format: Optional[str] = None
    status: int = 200
    warnings: int = 0
    streamed: bool = False

    def emit(self):
        logger.info("request", extra={
            "request_id": self.request_id,
            "route": self.route,
            "client_format": self.client_format,
            "upstream_format": self.upstream_format,
            "status": self.status,
            "warnings": self.warnings,
            "latency_ms": round((time.perf_counter() - self.started) * 1000, 3),
            "streamed": self.streamed,
        })


def _split_target(target: Optional[str]) -> Tuple[Optional[str], Optional[str]]:
    """``gemini-pro:streamGenerateContent`` -> (model, method)"""
    if not target:
        return None, None
    model, _, method = target.partition(":")
    return model or None, method or None


class Gateway:
    def __init__(self, config: GatewayConfig, registry: Optional[ConverterRegistry] = None,
                 client: Optional[UpstreamClient] = None):
        self.config = config
        self.registry = registry or default_registry()
        self.client = client or UpstreamClient(config.timeouts)

    def app(self) -> web.Application:
        app = web.Application(client_max_size=self.config.max_request_bytes)
        app[GATEWAY_KEY] = self
        app.router.add_get("/health", self.health)
        for route in self.config.routes:
            handler = self._handler(route)
            app.router.add_post(route.path_prefix, handler)
            app.router.add_post(route.path_prefix.rstrip("/") + "/{target}", handler)
        app.on_cleanup.append(self._cleanup)
        return app

    async def _cleanup(self, app: web.Application):
        await self.client.close()

    async def health(self, request: web.Request) -> web.Response:
        return web.json_response({"ok": True, "routes": [route.path_prefix for route in self.config.routes]})

    def _handler(self, route: RouteConfig):
        async def handle(request: web.Request) -> web.StreamResponse:
            return await self.handle_request(request, route)
        return handle

    # -- request pipeline -------------------------------------------------------

    async def _read_body(self, request: web.Request) -> Any:
        try:
            raw = await request.read()
        except web.HTTPRequestEntityTooLarge:
            raise _HttpFailure(413, {"error": "request_too_large",
                                     "message": f"body exceeds {self.config.max_request_bytes} bytes"})
        try:
            return json.loads(raw)
        except ValueError:
            raise _HttpFailure(400, MalformedInput("request body is not valid JSON", "$").to_dict())

    def _client_format(self, route: RouteConfig, body: Any) -> ProviderFormat:
        if not route.auto:
            return route.client_format
        detected = detect_format(body)
        if not detected.known:
            raise _HttpFailure(422, {"error": UnknownFormat.code, "message": "could not detect the body's format"})
        return detected.format

    def _upstream_body(self, route: RouteConfig, body: Dict[str, Any], model: str, streamed: bool) -> Dict[str, Any]:
        if route.upstream_format == ProviderFormat.GOOGLE:
            body.pop("model", None)
            return body
        body["model"] = model
        if streamed:
            body["stream"] = True
        else:
            body.pop("stream", None)
        return body

    async def handle_request(self, request: web.Request, route: RouteConfig) -> web.StreamResponse:
        log = RequestLog(uuid.uuid4().hex[:12], route.path_prefix, upstream_format=route.upstream_format.value)
        try:
            body = await self._read_body(request)
            client_format = self._client_format(route, body)
            log.client_format = client_format.value
            model_hint, method = _split_target(request.match_info.get("target"))
            if client_format == ProviderFormat.GOOGLE:
                streamed = method == GOOGLE_STREAM_METHOD
            else:
                streamed = isinstance(body, dict) and body.get("stream") is True
            log.streamed = streamed
            try:
                translation = self.registry.translate(
                    body, client_format, route.upstream_format, "request", self.config.metadata_mode, model_hint,
                )
            except RosettaError as e:
                raise _HttpFailure(400, e.to_dict())
            log.warnings = len(translation.warnings)
            model = route.model_for(translation.ir.model)
            upstream_body = self._upstream_body(route, translation.body, model, streamed)
            if streamed:
                return await self.relay_stream(request, route, client_format, upstream_body, model, log)
            return await self._forward(route, client_format, upstream_body, model, log)
        except _HttpFailure as e:
            log.status = e.status
            return web.json_response(e.body, status=e.status, headers={WARNINGS_HEADER: str(log.warnings)})
        except UpstreamError as e:
            log.status = 502
            return web.json_response(e.to_dict(), status=502, headers={WARNINGS_HEADER: str(log.warnings)})
        finally:
            log.emit()

    async def _forward(self, route: RouteConfig, client_format: ProviderFormat, body: Dict[str, Any], model: str,
                       log: RequestLog) -> web.Response:
        _, upstream_body = await self.client.post_json(route, body, model)
        try:
            translation = self.registry.translate(
                upstream_body, route.upstream_format, client_format, "response", self.config.metadata_mode, model,
            )
        except RosettaError as e:
            raise UpstreamError(f"upstream response could not be translated: {e}", 200, upstream_body) from e
        log.warnings += len(translation.warnings)
        for warning in translation.warnings:
            logger.debug("conversion warning", extra={"request_id": log.request_id, "warning": warning.to_dict()})
        return web.json_response(translation.body, headers={WARNINGS_HEADER: str(log.warnings)})

    # -- streaming --------------------------------------------------------------

    async def relay_stream(self, request: web.Request, route: RouteConfig, client_format: ProviderFormat,
                           body: Dict[str, Any], model: str, log: RequestLog) -> web.StreamResponse:
        translator = self.registry.stream_translator(
            route.upstream_format, client_format, self.config.metadata_mode, model,
            google_stream_mode=route.google_stream_mode,
        )
        dialect = translator.target.sse_dialect
        async with self.client.stream(route, body, model) as upstream:
            response = web.StreamResponse(headers={
                "Content-Type": "text/event-stream",
                "Cache-Control": "no-cache",
                WARNINGS_HEADER: str(log.warnings),
            })
            await response.prepare(request)
            relay = _Relay(translator, response, dialect)
            try:
                async for chunk in upstream.content.iter_any():
                    if await relay.frames(relay.parser.feed(chunk)):
                        break
                else:
                    await relay.frames(relay.parser.close())
                await relay.send(translator.close())
            except (RosettaError, aiohttp.ClientError, asyncio.TimeoutError) as e:
                message = str(e) or e.__class__.__name__
                logger.warning("stream relay failed", extra={"request_id": log.request_id, "error": message})
                await relay.send(translator.fail(message))
            await response.write_eof()
        log.warnings += len(translator.warnings)
        return response


@dataclass
class _Relay:
    translator: StreamTranslator
    response: web.StreamResponse
    dialect: str
    parser: SseParser = field(default_factory=SseParser)
    ordinal: int = 0

    async def send(self, payloads: List[Any]) -> None:
        for payload in payloads:
            await self.response.write(encode_payload(payload, self.dialect))

    async def frames(self, frames) -> bool:
        """Relay parsed frames; True once the upstream stream has ended."""
        for frame in frames:
            payload = frame_payload(frame, self.ordinal)
            self.ordinal += 1
            await self.send(self.translator.feed(payload))
            if self.translator.finished:
                return True
        return False


class _HttpFailure(Exception):
    def __init__(self, status: int, body: Dict[str, Any]):
        super().__init__(body.get("message", ""))
        self.status = status
        self.body = body


def create_app(config: GatewayConfig, registry: Optional[ConverterRegistry] = None,
               client: Optional[UpstreamClient] = None) -> web.Application:
    return Gateway(config, registry, client).app()


def run_gateway(config: GatewayConfig) -> None:
    configure_logging(config.log_level)
    logger.info("gateway listening", extra={
        "host": config.listen.host, "port": config.listen.port, "routes": [r.path_prefix for r in config.routes],
    })
    web.run_app(create_app(config), host=config.listen.host, port=config.listen.port, print=None)


__all__ = ["Gateway", "create_app", "run_gateway"]
