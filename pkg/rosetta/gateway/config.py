"""Gateway configuration: a YAML file with ${VAR} interpolation.

Example::

    listen:
      host: 0.0.0.0
      port: 8080
    metadata_mode: strip
    routes:
      - client_format: openai_chat
        upstream_format: anthropic
        upstream_base_url: https://api.anthropic.com
        api_key_env: ANTHROPIC_API_KEY
      - client_format: auto
        path_prefix: /any
        upstream_format: openai_chat
        upstream_base_url: ${OPENAI_BASE_URL:-https://api.openai.com}
        api_key_env: OPENAI_API_KEY

Environment overrides: ROSETTA_HOST, ROSETTA_PORT, ROSETTA_LOG_LEVEL.
"""

from __future__ import annotations

import os
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from rosetta.config.defaults import (
    DEFAULT_CONNECT_TIMEOUT_MS,
    DEFAULT_HOST,
    DEFAULT_MAX_REQUEST_BYTES,
    DEFAULT_PORT,
    DEFAULT_READ_TIMEOUT_MS,
    DEFAULT_STREAM_IDLE_TIMEOUT_S,
    ROUTE_PREFIXES,
)
from rosetta.converters.context import MetadataMode
from rosetta.converters.errors import GatewayConfigError
from rosetta.ir.types import ProviderFormat

_VARIABLE = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)(?::-([^}]*))?\}")


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class ListenConfig(_Frozen):
    host: str = DEFAULT_HOST
    port: int = Field(default=DEFAULT_PORT, ge=0, le=65535)


class TimeoutConfig(_Frozen):
    connect_ms: int = Field(default=DEFAULT_CONNECT_TIMEOUT_MS, gt=0)
    read_ms: int = Field(default=DEFAULT_READ_TIMEOUT_MS, gt=0)
    stream_idle_s: float = Field(default=DEFAULT_STREAM_IDLE_TIMEOUT_S, gt=0)


class RouteConfig(_Frozen):
    client_format: Union[ProviderFormat, Literal["auto"]] = "auto"
    upstream_format: ProviderFormat
    upstream_base_url: str
    api_key_env: Optional[str] = None
    path_prefix: Optional[str] = None
    model_aliases: Dict[str, str] = Field(default_factory=dict)
    google_stream_mode: Literal["accumulated", "incremental"] = "accumulated"

    @model_validator(mode="after")
    def _default_prefix(self) -> "RouteConfig":
        if self.path_prefix is None:
            if self.client_format == "auto":
                raise ValueError("auto-detecting routes need an explicit path_prefix")
            object.__setattr__(self, "path_prefix", ROUTE_PREFIXES[self.client_format.value])
        if not self.path_prefix.startswith("/"):
            raise ValueError(f"path_prefix {self.path_prefix!r} must start with '/'")
        object.__setattr__(self, "upstream_base_url", self.upstream_base_url.rstrip("/"))
        return self

    @property
    def auto(self) -> bool:
        return self.client_format == "auto"

    def model_for(self, model: str) -> str:
        return self.model_aliases.get(model, model)

    def api_key(self) -> Optional[str]:
        return os.environ.get(self.api_key_env) if self.api_key_env else None


class GatewayConfig(_Frozen):
    listen: ListenConfig = Field(default_factory=ListenConfig)
    routes: List[RouteConfig]
    metadata_mode: MetadataMode = MetadataMode.STRIP
    timeouts: TimeoutConfig = Field(default_factory=TimeoutConfig)
    log_level: str = "INFO"
    max_request_bytes: int = Field(default=DEFAULT_MAX_REQUEST_BYTES, gt=0)

    @field_validator("routes")
    @classmethod
    def _unique_prefixes(cls, routes: List[RouteConfig]) -> List[RouteConfig]:
        if not routes:
            raise ValueError("at least one route is required")
        seen = set()
        for route in routes:
            if route.path_prefix in seen:
                raise ValueError(f"duplicate path_prefix {route.path_prefix!r}")
            seen.add(route.path_prefix)
        return routes

    @field_validator("log_level")
    @classmethod
    def _level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return value


def interpolate(value: Any, environ: Mapping[str, str]) -> Any:
    """Replace ${VAR} and ${VAR:-default} in every string of a parsed document."""
    if isinstance(value, str):
        def replace(match: re.Match) -> str:
            name, default = match.group(1), match.group(2)
            if name in environ:
                return environ[name]
            if default is not None:
                return default
            raise GatewayConfigError(f"environment variable {name} is not set")
        return _VARIABLE.sub(replace, value)
    if isinstance(value, list):
        return [interpolate(item, environ) for item in value]
    if isinstance(value, dict):
        return {key: interpolate(item, environ) for key, item in value.items()}
    return value


def config_from_dict(data: Mapping[str, Any], environ: Optional[Mapping[str, str]] = None) -> GatewayConfig:
    environ = os.environ if environ is None else environ
    data = interpolate(dict(data), environ)
    listen = dict(data.get("listen") or {})
    if environ.get("ROSETTA_HOST"):
        listen["host"] = environ["ROSETTA_HOST"]
    if environ.get("ROSETTA_PORT"):
        listen["port"] = environ["ROSETTA_PORT"]
    data["listen"] = listen
    if environ.get("ROSETTA_LOG_LEVEL"):
        data["log_level"] = environ["ROSETTA_LOG_LEVEL"]
    try:
        return GatewayConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise GatewayConfigError(f"invalid gateway config: {first['msg']}", f"$.{location}" if location else None) from None


def load_config(path: Union[str, Path]) -> GatewayConfig:
    load_dotenv()
    path = Path(path)
    if not path.exists():
        raise GatewayConfigError(f"config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text()) or {}
    except yaml.YAMLError as e:
        raise GatewayConfigError(f"config file is not valid YAML: {e}") from None
    if not isinstance(data, dict):
        raise GatewayConfigError("config file must hold a mapping")
    return config_from_dict(data)


__all__ = [
    "GatewayConfig",
    "ListenConfig",
    "RouteConfig",
    "TimeoutConfig",
    "config_from_dict",
    "interpolate",
    "load_config",
]
