"""Adiabatic entanglement generation in collective spin systems.

Simulation and verification toolkit for a generalized Lipkin-Meshkov-Glick
model on the symmetric (Dicke) subspace: exact spectra, supersymmetric
ground-state construction, adiabatic transfer dynamics, variational gap
bounds, and the underlying bichromatically driven trapped-ion model.
"""

__version__ = "1.0.0"

from .errors import (
    BasisMismatchError,
    ConfigError,
    CutoffOverflowError,
    InapplicableBoundError,
    InvalidParameterError,
    LmgError,
    UnsupportedCaseError,
)
from .model import LMGParams, build_hamiltonian, classify_case, spectrum, target_state
from .spinops import DickeBasis, OperatorMatrix, StateVector, build_spin_ops

__all__ = [
    "__version__",
    "BasisMismatchError", "ConfigError", "CutoffOverflowError",
    "InapplicableBoundError", "InvalidParameterError", "LmgError",
    "UnsupportedCaseError",
    "LMGParams", "build_hamiltonian", "classify_case", "spectrum", "target_state",
    "DickeBasis", "OperatorMatrix", "StateVector", "build_spin_ops",
]
