"""HTTP translation gateway"""

from rosetta.gateway.config import GatewayConfig, RouteConfig, load_config
from rosetta.gateway.server import Gateway, create_app, run_gateway

__all__ = ["Gateway", "GatewayConfig", "RouteConfig", "create_app", "load_config", "run_gateway"]
