"""Observers hovering near a Schwarzschild horizon.

A static observer at radius ``r0`` outside a black hole of Schwarzschild
radius ``R_S`` needs the proper acceleration

    a = (1 / (2 R_S)) (1 - R_S / r0)^(-1/2),

and for zero-angular-momentum modes the near-horizon physics is that of
Rindler space at this acceleration.  Writing the distance to the horizon
as ``x = d / R_S`` and the rescaled frequency ``omega_g = 4 pi R_S omega``,
the acceleration parameters are

    r = arctanh(exp(-(omega_g / 2) sqrt(x / (1 + x)))),   r_f = arctan(same).

``R_S`` is the length unit: distances are reported as ``d / R_S`` and
accelerations as ``a R_S``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from scipy.optimize import brentq

from . import analytic
from .states import Kind
from .thermo import AccelParams, Statistics, _as_statistics, occupation, partition, unruh_temperature
from .thermo import helmholtz_free_energy

__all__ = [
    "HoverSpec",
    "DistanceRow",
    "DistanceScan",
    "acceleration_at_radius",
    "horizon_r",
    "horizon_accel_params",
    "vanishing_margin",
    "vanishing_distance",
    "vanishing_distance_closed_form",
    "frequency_for_vanishing_distance",
    "negativity_vs_distance",
]

DISTANCE_TOL = 1e-10


@dataclass(frozen=True)
class HoverSpec:
    """Black hole and observer placement.  ``r0_Omega`` defaults to ``r0`` (co-located)."""

    rs: float
    r0: float
    omega: float = 1.0
    Omega: float = 1.0
    r0_Omega: float | None = None

    def __post_init__(self):
        if not self.rs > 0:
            raise ValueError("Schwarzschild radius must be positive")
        for r in (self.r0, self.r0_Omega if self.r0_Omega is not None else self.r0):
            if not r > self.rs:
                raise ValueError("hover radius must lie outside the horizon")
        if not (self.omega > 0 and self.Omega > 0):
            raise ValueError("frequencies must be positive")

    @property
    def omega_g(self) -> float:
        return 4 * math.pi * self.rs * self.omega

    @property
    def Omega_g(self) -> float:
        return 4 * math.pi * self.rs * self.Omega


def acceleration_at_radius(rs: float, r0: float) -> float:
    """Proper acceleration of a static observer at radius r0."""
    if not rs > 0:
        raise ValueError("Schwarzschild radius must be positive")
    if not r0 > rs:
        raise ValueError("hover radius must lie outside the horizon")
    return 1.0 / (2.0 * rs * math.sqrt(1.0 - rs / r0))


def _redshift_root(x: float) -> float:
    """sqrt(1 - R_S/r0) written through x = d/R_S without cancellation."""
    return math.sqrt(x / (1.0 + x))


def horizon_r(statistics, omega_g: float, d_over_rs: float) -> float:
    """Acceleration parameter at distance d/R_S for rescaled frequency omega_g."""
    st = _as_statistics(statistics)
    if not d_over_rs > 0:
        raise ValueError("distance to the horizon must be positive")
    y = 0.5 * omega_g * _redshift_root(d_over_rs)
    x = math.exp(-y)
    if st is Statistics.FERMION:
        return math.atan(x)
    if x < 0.5:
        return math.atanh(x)
    return 0.5 * math.log((1.0 + x) / -math.expm1(-y))


def horizon_accel_params(spec: HoverSpec, statistics, which: str = "omega") -> AccelParams:
    """Thermal quantities of one hovering mode, with r taken from the horizon formula."""
    st = _as_statistics(statistics)
    r0 = spec.r0 if which == "omega" or spec.r0_Omega is None else spec.r0_Omega
    w = spec.omega if which == "omega" else spec.Omega
    d = (r0 - spec.rs) / spec.rs
    a = acceleration_at_radius(spec.rs, r0)
    return AccelParams(
        r=horizon_r(st, 4 * math.pi * spec.rs * w, d),
        unruh_temperature=unruh_temperature(a),
        partition=partition(st, w, a),
        occupation=occupation(st, w, a),
        helmholtz_free_energy=helmholtz_free_energy(st, w, a),
    )


def vanishing_margin(kind, omega_g: float, Omega_g: float, d1: float, d2: float | None = None) -> float:
    """Margin of the entanglement condition of a Phi-type state at the given distances.

    BB: 1 - tanh^2 r1 - tanh^2 r2.  BF: 1 - sinh^2 r * sin^2 r_f.  Positive
    means entangled.
    """
    k = Kind.parse(kind)
    d2 = d1 if d2 is None else d2
    s1 = _redshift_root(d1)
    s2 = _redshift_root(d2)
    if k is Kind.PHI_BB:
        return 1.0 - math.exp(-omega_g * s1) - math.exp(-Omega_g * s2)
    if k is Kind.PHI_BF:
        nb = 1.0 / math.expm1(omega_g * s1)
        nf = 1.0 / (math.exp(Omega_g * s2) + 1.0)
        return 1.0 - nb * nf
    raise ValueError("a vanishing distance exists only for Phi_BB and Phi_BF")


def vanishing_distance(kind, omega_g: float, Omega_g: float | None = None,
                       lo: float = 1e-12, hi: float = 1e12, tol: float = DISTANCE_TOL) -> float | None:
    """Co-located distance d*/R_S below which the Phi-type state is separable.

    Found by bisection on the condition margin, which grows with d.  Returns
    None when the state stays separable at every distance (condition fails
    even far away) and 0.0 when it never becomes separable in range.
    """
    Omega_g = omega_g if Omega_g is None else Omega_g
    f = lambda d: vanishing_margin(kind, omega_g, Omega_g, d)  # noqa: E731
    if f(hi) <= 0:
        return None
    if f(lo) > 0:
        return 0.0
    a, b = lo, hi
    # bisect in log space first to get a bracket of modest width, then linearly
    while b / a > 2.0:
        mid = math.sqrt(a * b)
        if f(mid) > 0:
            b = mid
        else:
            a = mid
    while b - a > tol:
        mid = 0.5 * (a + b)
        if f(mid) > 0:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


def vanishing_distance_closed_form(kind, omega_g: float, Omega_g: float | None = None) -> float | None:
    """d*/R_S by inverting the vanishing condition analytically.

    The condition fixes s = sqrt(x/(1+x)) (for equal Phi_BB frequencies
    s = ln 2 / omega_g); then x = s^2 / (1 - s^2).  Unequal frequencies
    need a one-dimensional root in s.
    """
    k = Kind.parse(kind)
    Omega_g = omega_g if Omega_g is None else Omega_g
    if k is Kind.PHI_BB and omega_g == Omega_g:
        s = math.log(2.0) / omega_g
    else:
        g = lambda s: vanishing_margin(k, omega_g, Omega_g, s * s / (1 - s * s))  # noqa: E731
        if g(1 - 1e-15) <= 0:
            return None
        s = brentq(g, 1e-15, 1 - 1e-15, xtol=1e-15, rtol=1e-15)
    if s >= 1.0:
        return None
    return s * s / (1.0 - s * s)


def frequency_for_vanishing_distance(kind, d_over_rs: float = 0.01) -> float:
    """Rescaled frequency omega_g (equal for both modes) that puts d* at ``d_over_rs``."""
    f = lambda w: vanishing_margin(kind, w, w, d_over_rs)  # noqa: E731
    # margin(w) increases with w; it is negative for small w
    hi = 1.0
    while f(hi) <= 0:
        hi *= 2.0
    return brentq(f, 1e-9, hi, xtol=1e-14, rtol=1e-14)


@dataclass
class DistanceRow:
    d_over_rs: float
    a_times_rs: float
    r_omega: float
    r_Omega: float
    negativity: float


@dataclass
class DistanceScan:
    kind: Kind
    method: str
    rows: list = field(default_factory=list)
    d_star: float | None = None


def negativity_vs_distance(kind, distances: Sequence[float], omega_g: float, Omega_g: float | None = None,
                           method: str = "analytic", distances_Omega: Sequence[float] | None = None,
                           sign: int = +1, alpha: float = math.pi / 4) -> DistanceScan:
    """Negativity of a family as both observers hover at the given distances d/R_S.

    ``distances_Omega`` places the second observer independently.  For
    Phi_BB and Phi_BF the co-located vanishing distance d* is attached.
    """
    from .entanglement import family_negativity

    k = Kind.parse(kind)
    Omega_g = omega_g if Omega_g is None else Omega_g
    if method not in ("analytic", "numeric"):
        raise ValueError("method must be 'analytic' or 'numeric'")
    s1, s2 = k.statistics
    d2s = distances if distances_Omega is None else distances_Omega
    if len(d2s) != len(distances):
        raise ValueError("distance lists differ in length")
    scan = DistanceScan(k, method)
    for d1, d2 in zip(distances, d2s):
        r1 = horizon_r(s1, omega_g, d1)
        r2 = horizon_r(s2, Omega_g, d2)
        if method == "analytic":
            neg = analytic.family_negativity_r(k, r1, r2).total
        else:
            neg = family_negativity(k, (r1, r2), sign=sign, alpha=alpha).total
        scan.rows.append(DistanceRow(d1, 0.5 * math.sqrt((1.0 + d1) / d1), r1, r2, neg))
    if k in (Kind.PHI_BB, Kind.PHI_BF):
        scan.d_star = vanishing_distance(k, omega_g, Omega_g)
    return scan
