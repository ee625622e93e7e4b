"""Thermal and kinematic quantities of a single Unruh mode.

An observer with proper acceleration ``a`` sees the Minkowski vacuum as a
thermal bath at the Unruh temperature ``T = a / 2pi``.  Everything else in
the package is expressed through the quantities defined here: partition
functions, occupation numbers and the dimensionless acceleration
parameters ``r`` (bosons) and ``r_f`` (fermions).

Units are natural (c = hbar = k_B = 1).  The inertial point ``a = 0`` is
handled by explicit limit branches (T = 0, Z = 1, n = 0, r = 0) so that no
``exp(-inf)`` is ever evaluated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "Statistics",
    "ModeSpec",
    "AccelParams",
    "unruh_temperature",
    "partition",
    "occupation",
    "accel_param",
    "helmholtz_free_energy",
    "accel_params",
]


class Statistics(enum.Enum):
    BOSON = "boson"
    CHARGED_BOSON = "charged_boson"
    FERMION = "fermion"

    @property
    def is_bosonic(self) -> bool:
        return self is not Statistics.FERMION


def _as_statistics(statistics) -> Statistics:
    if isinstance(statistics, Statistics):
        return statistics
    try:
        return Statistics(str(statistics).lower())
    except ValueError:
        raise ValueError(f"unknown statistics {statistics!r}") from None


def _check(omega: float, a: float) -> None:
    if not omega > 0:
        raise ValueError(f"frequency must be positive, got {omega!r}")
    if not a >= 0:
        raise ValueError(f"acceleration must be non-negative, got {a!r}")


@dataclass(frozen=True)
class ModeSpec:
    """One Unruh mode: its statistics, frequency and the observer's acceleration."""

    statistics: Statistics
    frequency: float
    acceleration: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "statistics", _as_statistics(self.statistics))
        _check(self.frequency, self.acceleration)

    @property
    def r(self) -> float:
        """Acceleration parameter (``r`` for bosons, ``r_f`` for fermions)."""
        return accel_param(self.statistics, self.frequency, self.acceleration)

    def params(self) -> "AccelParams":
        return accel_params(self.statistics, self.frequency, self.acceleration)


@dataclass(frozen=True)
class AccelParams:
    """Derived thermal quantities of one mode.

    ``helmholtz_free_energy`` carries its inertial limit 0 when a = 0.
    """

    r: float
    unruh_temperature: float
    partition: float
    occupation: float
    helmholtz_free_energy: float


def unruh_temperature(a: float) -> float:
    """T = a / 2pi.  Zero for an inertial observer."""
    if not a >= 0:
        raise ValueError(f"acceleration must be non-negative, got {a!r}")
    return a / (2.0 * math.pi)


def _boltzmann(omega: float, a: float) -> float:
    """exp(-omega/T) = exp(-2 pi omega / a), with the a = 0 limit 0."""
    if a == 0:
        return 0.0
    return math.exp(-2.0 * math.pi * omega / a)


def partition(statistics, omega: float, a: float) -> float:
    """Single-mode partition function.

    Boson: 1 / (1 - exp(-omega/T)).  Fermion: 1 + exp(-omega/T).
    Both equal 1 at a = 0.
    """
    st = _as_statistics(statistics)
    _check(omega, a)
    if a == 0:
        return 1.0
    if st is Statistics.FERMION:
        return 1.0 + _boltzmann(omega, a)
    return -1.0 / math.expm1(-2.0 * math.pi * omega / a)


def occupation(statistics, omega: float, a: float) -> float:
    """Thermal occupation: Bose-Einstein or Fermi-Dirac at the Unruh temperature."""
    st = _as_statistics(statistics)
    _check(omega, a)
    if a == 0:
        return 0.0
    x = 2.0 * math.pi * omega / a
    if st is Statistics.FERMION:
        return 1.0 / (1.0 + math.exp(x)) if x < 700 else math.exp(-x)
    return 1.0 / math.expm1(x)


def accel_param(statistics, omega: float, a: float) -> float:
    """Acceleration parameter.

    Boson and charged boson: ``r = arctanh(exp(-pi omega / a))``, so that
    ``tanh(r)**2 = exp(-omega/T)``.  Fermion: ``r_f = arctan(exp(-pi omega / a))``
    which tends to pi/4 as a grows without bound.
    """
    st = _as_statistics(statistics)
    _check(omega, a)
    if a == 0:
        return 0.0
    y = math.pi * omega / a
    x = math.exp(-y)
    if st is Statistics.FERMION:
        return math.atan(x)
    if x < 0.5:
        return math.atanh(x)
    # near x = 1 write arctanh(x) = 0.5 ln((1+x)/(1-x)) with 1-x from expm1
    return 0.5 * math.log((1.0 + x) / -math.expm1(-y))


def helmholtz_free_energy(statistics, omega: float, a: float) -> float:
    """F = -T ln Z.  Undefined (rejected) at a = 0; its limit there is 0."""
    st = _as_statistics(statistics)
    _check(omega, a)
    if a == 0:
        raise ValueError("free energy needs a > 0; the inertial limit is 0")
    T = unruh_temperature(a)
    if st is Statistics.FERMION:
        return -T * math.log1p(_boltzmann(omega, a))
    return T * math.log(-math.expm1(-2.0 * math.pi * omega / a))


def accel_params(statistics, omega: float, a: float) -> AccelParams:
    st = _as_statistics(statistics)
    return AccelParams(
        r=accel_param(st, omega, a),
        unruh_temperature=unruh_temperature(a),
        partition=partition(st, omega, a),
        occupation=occupation(st, omega, a),
        helmholtz_free_energy=0.0 if a == 0 else helmholtz_free_energy(st, omega, a),
    )
