"""Python bindings for the LEO constellation routing simulator."""

import json as _json

from ._core import (
    LATENCY_CSV_HEADER,
    PACKET_CSV_HEADER,
    ROUTERS,
    STABILITY_CSV_HEADER,
    TIMESERIES_CSV_HEADER,
    ConfigError,
    InfeasibleScenario,
    __version__,
    antenna_gain_dbi,
    default_config_json,
    free_space_path_loss_db,
    normalize_config,
    q_update,
    regress,
    shortest_path,
    stability_decision,
    t_critical,
)
from ._core import run_cell as _run_cell


def default_config():
    """Built-in defaults as a dict."""
    return _json.loads(default_config_json())


def run_cell(router, num_gateways, seed=1, config=None, out="", write_packets=True):
    """Run one cell. `config` may be a dict or JSON text overlaying the defaults."""
    if isinstance(config, dict):
        config = _json.dumps(config)
    return _run_cell(router, num_gateways, seed, config or "", out, write_packets)


__all__ = [
    "LATENCY_CSV_HEADER",
    "PACKET_CSV_HEADER",
    "ROUTERS",
    "STABILITY_CSV_HEADER",
    "TIMESERIES_CSV_HEADER",
    "ConfigError",
    "InfeasibleScenario",
    "__version__",
    "antenna_gain_dbi",
    "default_config",
    "free_space_path_loss_db",
    "normalize_config",
    "q_update",
    "regress",
    "run_cell",
    "shortest_path",
    "stability_decision",
    "t_critical",
]
