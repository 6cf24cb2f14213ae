"""Harmonic fields in layered media: image series, thin-layer approximations and oracles."""

from ._core import *  # noqa: F401,F403
from ._core import Error, ValidationError, ConvergenceError, CapabilityError, EstimationError, SolverError

__version__ = "0.1.0"
