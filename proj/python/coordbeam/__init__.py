"""Sub-6 GHz aided mmWave multi-user beam selection."""

import json

from . import _core
from ._core import (
    BudgetExceeded,
    ConfigError,
    InvalidParameter,
    association,
    codebook,
    exhaustive_search,
    inverse_cosine_grid,
    lemma1_audit,
    lemma1_audit_distinct,
    sinr_schur,
    steering_vector,
    sum_rate,
    zf_combine,
)

__version__ = "0.1.0"


def default_config():
    """Default scenario as a dict."""
    return json.loads(_core.default_config())


def _dump(config):
    return json.dumps(config if config is not None else {})


def sweep(axis, values, config=None):
    """Runs the trials at every axis value; axis is snr, radius or distance."""
    return _core.sweep(_dump(config), axis, [float(v) for v in values])


def sweep_csv(axis, values, config=None):
    return _core.sweep_csv(_dump(config), axis, [float(v) for v in values])


def simulate(config=None):
    """One point at the configured SNR."""
    cfg = json.loads(_core.normalize_config(_dump(config)))
    return sweep("snr", [cfg["snr_db"]], cfg)[0]


def verify(seed=2019):
    """List of (name, passed, measured, detail)."""
    return _core.verify(seed)
