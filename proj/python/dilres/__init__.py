"""Python access to the dilres core: configurations, Hamiltonians, spectra and verification suites."""

import json

from . import _core
from ._core import ConfigError, InvalidArgument, NumericalError, eigs as _eigs, hamiltonian, run, spectrum_csv, suite_names

__all__ = [
    "ConfigError",
    "InvalidArgument",
    "NumericalError",
    "config",
    "eigs",
    "grid",
    "hamiltonian",
    "model",
    "run",
    "run_suite",
    "spectrum_csv",
    "suite_names",
]


def config(toml_text=""):
    return json.loads(_core.config_json(toml_text))


def grid(n_radial, r_max, group="inversion-only", Lambda=1.0):
    return json.loads(_core.grid_json(n_radial, r_max, group, Lambda))


def model(toml_text=""):
    return json.loads(_core.model_json(toml_text))


def eigs(matrix):
    values, residuals, summary = _eigs(matrix)
    return values, residuals, json.loads(summary)


def run_suite(name, seed=0):
    return json.loads(_core.run_suite(name, seed))
