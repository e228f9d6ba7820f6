"""Default values for converters, the gateway and the benchmark"""

DEFAULT_ANTHROPIC_MAX_TOKENS = 4096
ANTHROPIC_VERSION = "2023-06-01"

DEFAULT_MAX_REQUEST_BYTES = 10 * 1024 * 1024
DEFAULT_STREAM_IDLE_TIMEOUT_S = 120
DEFAULT_CONNECT_TIMEOUT_MS = 10_000
DEFAULT_READ_TIMEOUT_MS = 120_000

DEFAULT_HOST = '127.0.0.1'
DEFAULT_PORT = 8080

WARNINGS_HEADER = 'X-Rosetta-Warnings'

# Client-facing path prefixes per format
ROUTE_PREFIXES = {
    'openai_chat': '/v1/chat/completions',
    'openai_responses': '/v1/responses',
    'anthropic': '/v1/messages',
    'google': '/v1beta/models',
}

# Upstream endpoint paths, appended to a route's upstream_base_url
UPSTREAM_PATHS = {
    'openai_chat': '/v1/chat/completions',
    'openai_responses': '/v1/responses',
    'anthropic': '/v1/messages',
    'google': '/v1beta/models/{model}:generateContent',
    'google_stream': '/v1beta/models/{model}:streamGenerateContent?alt=sse',
}

# How each upstream expects its key: (header name, value template)
AUTH_HEADERS = {
    'openai_chat': ('Authorization', 'Bearer {key}'),
    'openai_responses': ('Authorization', 'Bearer {key}'),
    'anthropic': ('x-api-key', '{key}'),
    'google': ('x-goog-api-key', '{key}'),
}

EXTRA_UPSTREAM_HEADERS = {
    'anthropic': {'anthropic-version': ANTHROPIC_VERSION},
}

# Reasoning effort <-> thinking budget, used when a target supports only one of them
EFFORT_BUDGETS = {
    'low': 1024,
    'medium': 8192,
    'high': 24576,
}

# Reference medians in microseconds (CPython, Intel Core Ultra 7 155H, one core)
REFERENCE_MEDIANS_US = {
    ('simple', 'openai_chat'): 21.0,
    ('multiturn', 'google'): 77.0,
}

BENCH_PAYLOADS = ('simple', 'multiturn', 'tools', 'responses')
BENCH_DEFAULT_ITERATIONS = 1000
BENCH_MEDIAN_LIMIT_US = 1000.0
BENCH_P95_LIMIT_US = 2000.0


def budget_to_effort(budget):
    """Closest effort level for a thinking budget"""
    if budget <= EFFORT_BUDGETS['low']:
        return 'low'
    if budget <= EFFORT_BUDGETS['medium']:
        return 'medium'
    return 'high'
