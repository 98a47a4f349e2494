"""Exact and Monte Carlo tools for the multispecies q-boson zero range process.

Modules, bottom up: :mod:`~uqzrp.qseries` (scalars, q-series),
:mod:`~uqzrp.statespace` (configurations), :mod:`~uqzrp.stochastic_r`
(the local stochastic R matrix), :mod:`~uqzrp.markov` (transfer matrices,
generators, steady states), :mod:`~uqzrp.qboson` (q-boson algebra and
Fock space), :mod:`~uqzrp.mpa` (matrix product weights) and
:mod:`~uqzrp.simulator`.
"""

from ._checks import Check
from .markov import (
    RateTable,
    SectorOperator,
    SteadyState,
    hamiltonian,
    h_left,
    h_right,
    steady_state,
    transfer_matrix,
)
from .mpa import HOMOGENEOUS, INHOMOGENEOUS, TAZRP, MpaQuery, crosscheck_steady, mpa_probability
from .qboson import NOElement, bminus, bplus, kop, no_trace
from .qseries import EXACT, FLOAT, ModelParams, ModeError, g_weight, parse_rational, qbinom, qfact, qpoch
from .statespace import Sector, SectorTooLarge, enumerate_sector, format_config, parse_config
from .stochastic_r import phi_weight, r_element

__all__ = [
    "Check",
    "EXACT",
    "FLOAT",
    "HOMOGENEOUS",
    "INHOMOGENEOUS",
    "TAZRP",
    "ModeError",
    "ModelParams",
    "MpaQuery",
    "NOElement",
    "RateTable",
    "Sector",
    "SectorOperator",
    "SectorTooLarge",
    "SteadyState",
    "bminus",
    "bplus",
    "crosscheck_steady",
    "enumerate_sector",
    "format_config",
    "g_weight",
    "h_left",
    "h_right",
    "hamiltonian",
    "kop",
    "mpa_probability",
    "no_trace",
    "parse_config",
    "parse_rational",
    "phi_weight",
    "qbinom",
    "qfact",
    "qpoch",
    "r_element",
    "steady_state",
    "transfer_matrix",
]
