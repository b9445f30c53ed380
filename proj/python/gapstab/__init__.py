"""Python access to the gapstab core.

The heavy lifting happens in the compiled extension; this layer only decodes
reports and reads config files.
"""

import json
from pathlib import Path

from . import _gapstab
from ._gapstab import (
    BdgData,
    DoubledHamiltonian,
    FlowState,
    GapstabError,
    Lattice,
    SingleParticleModel,
    build_A,
    build_doubled_h0,
    build_lattice,
    config_hash,
    integrate_flow,
    model_from_matrix,
    structure_report,
    suite_names,
    u_mu,
    uniform_grid,
    verify_doubling_identity,
    w_hat,
    w_time,
)


def run_suite(config, suites=None):
    """Run suites for a config given as a path or TOML text; returns the report dict."""
    text = Path(config).read_text() if _is_path(config) else str(config)
    return json.loads(_gapstab.run_config_text(text, list(suites or [])))


def _is_path(config):
    if isinstance(config, Path):
        return True
    return "\n" not in config and config.endswith(".toml")


__all__ = [
    "BdgData",
    "DoubledHamiltonian",
    "FlowState",
    "GapstabError",
    "Lattice",
    "SingleParticleModel",
    "build_A",
    "build_doubled_h0",
    "build_lattice",
    "config_hash",
    "integrate_flow",
    "model_from_matrix",
    "run_suite",
    "structure_report",
    "suite_names",
    "u_mu",
    "uniform_grid",
    "verify_doubling_identity",
    "w_hat",
    "w_time",
]
