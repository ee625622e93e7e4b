"""Entanglement of Bell-type states of two Unruh modes seen by accelerated observers."""

from .thermo import Statistics, ModeSpec, AccelParams
from .states import Kind, StateFamily, Truncation

__version__ = "0.1.0"

__all__ = ["Statistics", "ModeSpec", "AccelParams", "Kind", "StateFamily", "Truncation"]
