"""Unruh-basis Bell-type states expanded in the Rindler basis.

Each Unruh mode is written as a superposition of Rindler region I and II
excitations.  The single-mode expansions are

* neutral boson: ``|0> = sum_n a_n |n>_I |n>_II`` and
  ``|1> = sum_n abar_n |n+1>_I |n>_II`` with ``a_n = tanh^n r / cosh r`` and
  ``abar_n = tanh^n r sqrt(n+1) / cosh^2 r``;
* charged boson: the same with a particle and an antiparticle slot per
  region, coefficients ``tanh^(n+m) r / cosh^2 r`` (vacuum) and
  ``tanh^(n+m) r sqrt(n+1) / cosh^3 r`` (one particle);
* Dirac fermion: a finite 16-dimensional expansion in the factor order
  particle-I, antiparticle-II, antiparticle-I, particle-II.

Bosonic sums are truncated at ``nmax`` (on ``n + m`` for the charged case);
the missing weight is recorded as ``norm_deficit`` in the state metadata.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .fock import Factor, LabeledState, reduce_pure, superpose, tensor, DensityMatrix
from .thermo import ModeSpec, Statistics

__all__ = [
    "Kind",
    "StateFamily",
    "Truncation",
    "ModeExpansion",
    "boson_coefficients",
    "boson_unruh_state",
    "charged_boson_unruh_state",
    "fermion_unruh_state",
    "family_state",
    "build_state",
    "reduce_to_region_I",
    "required_nmax",
]

MODE_1 = "w"   # label of the mode with frequency omega
MODE_2 = "W"   # label of the mode with frequency Omega


class Kind(enum.Enum):
    PSI_FF = "Psi_FF"
    PHI_FF = "Phi_FF"
    PSI_BB = "Psi_BB"
    PHI_BB = "Phi_BB"
    X1 = "X1"
    X2 = "X2"
    PSI_BF = "Psi_BF"
    PHI_BF = "Phi_BF"
    PSI_ALPHA_BB = "Psi_alpha_BB"
    PHI_ALPHA_BB = "Phi_alpha_BB"

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, cls):
            return value
        for k in cls:
            if k.value.lower() == str(value).lower():
                return k
        raise ValueError(f"unknown state family {value!r}; choose from {[k.value for k in cls]}")

    @property
    def statistics(self) -> tuple[Statistics, Statistics]:
        B, C, F = Statistics.BOSON, Statistics.CHARGED_BOSON, Statistics.FERMION
        return {
            "FF": (F, F), "BB": (B, B), "BF": (B, F),
        }.get(self.value[-2:], (C, F) if self is Kind.X2 else (B, F))

    @property
    def has_alpha(self) -> bool:
        return "alpha" in self.value


# Constituent pairs (occupation of mode omega, occupation of mode Omega):
# the state is  (c1 +/- c2)/sqrt 2  or  sin(alpha) c1 + cos(alpha) c2.
_CONSTITUENTS = {
    Kind.PHI_FF: ((0, 0), ("+", "+")),
    Kind.PSI_FF: (("+", 0), (0, "+")),
    Kind.PHI_BB: ((0, 0), (1, 1)),
    Kind.PSI_BB: ((0, 1), (1, 0)),
    Kind.PHI_ALPHA_BB: ((0, 0), (1, 1)),
    Kind.PSI_ALPHA_BB: ((0, 1), (1, 0)),
    Kind.PHI_BF: ((0, 0), (1, "+")),
    Kind.PSI_BF: ((1, 0), (0, "+")),
    Kind.X1: ((0, "+"), (1, "-")),
    Kind.X2: (("+", "-"), ("-", "+")),
}


@dataclass(frozen=True)
class StateFamily:
    """A two-mode Bell-type state together with both observers' modes."""

    kind: Kind
    mode1: ModeSpec
    mode2: ModeSpec
    sign: int = +1
    alpha: float = math.pi / 4

    def __post_init__(self):
        kind = Kind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        if not 0 < self.alpha < math.pi / 2:
            raise ValueError("alpha must lie in (0, pi/2)")
        want = kind.statistics
        got = (self.mode1.statistics, self.mode2.statistics)
        if got != want:
            raise ValueError(f"{kind.value} needs modes {want[0].value}, {want[1].value}; got "
                             f"{got[0].value}, {got[1].value}")

    @classmethod
    def make(cls, kind, omega=1.0, Omega=1.0, a_omega=0.0, a_Omega=0.0, sign=+1,
             alpha=math.pi / 4) -> "StateFamily":
        kind = Kind.parse(kind)
        s1, s2 = kind.statistics
        return cls(kind, ModeSpec(s1, omega, a_omega), ModeSpec(s2, Omega, a_Omega), sign, alpha)

    @property
    def r_params(self) -> tuple[float, float]:
        return self.mode1.r, self.mode2.r


@dataclass(frozen=True)
class Truncation:
    """Bosonic cutoff policy.

    With ``nmax`` set the cutoff is fixed.  Otherwise the cutoff starts at
    ``start`` and doubles until the norm deficit falls below ``norm_tol``
    and the negativity moves by less than ``neg_tol`` under one more
    doubling (the doubling is driven by the entanglement module).
    """

    nmax: int | None = None
    start: int = 20
    norm_tol: float = 1e-8
    neg_tol: float = 1e-8
    max_nmax: int = 4096

    def __post_init__(self):
        if self.nmax is not None and self.nmax < 1:
            raise ValueError("nmax must be at least 1")
        if self.start < 1 or self.norm_tol <= 0 or self.neg_tol <= 0:
            raise ValueError("invalid truncation settings")


@dataclass(frozen=True)
class ModeExpansion:
    """Truncated expansion coefficients of one neutral bosonic mode."""

    r: float
    cutoff: int
    a: np.ndarray = field(repr=False)
    abar: np.ndarray = field(repr=False)

    @property
    def norm_deficit(self) -> float:
        return float(max(0.0, 1.0 - np.sum(self.a ** 2)))

    @property
    def norm_deficit_excited(self) -> float:
        return float(max(0.0, 1.0 - np.sum(self.abar ** 2)))


def boson_coefficients(r: float, nmax: int) -> ModeExpansion:
    """``a_n`` and ``abar_n`` for n = 0..nmax."""
    if r < 0:
        raise ValueError("r must be non-negative")
    n = np.arange(nmax + 1)
    t, ch = math.tanh(r), math.cosh(r)
    with np.errstate(under="ignore"):
        pw = t ** n if t > 0 else (n == 0).astype(float)
    return ModeExpansion(r, nmax, pw / ch, pw * np.sqrt(n + 1.0) / ch**2)


def _tail_fraction(t2: float, nmax: int, excited: bool) -> float:
    """Exact missing weight beyond nmax of a neutral-boson expansion.

    Vacuum: sum_{n>N} (1-t2) t2^n = t2^(N+1).  One particle:
    sum_{n>N} (1-t2)^2 (n+1) t2^n = t2^(N+1) (1 + (N+1)(1-t2)).
    """
    if t2 == 0:
        return 0.0
    tail = t2 ** (nmax + 1)
    if excited:
        tail *= 1.0 + (nmax + 1) * (1.0 - t2)
    return tail


def boson_unruh_state(occ: int, r: float, nmax: int, mode: str = MODE_1) -> LabeledState:
    """Neutral bosonic Unruh vacuum (occ=0) or one-particle state (occ=1)."""
    if occ not in (0, 1):
        raise ValueError("occ must be 0 or 1")
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    ex = boson_coefficients(r, nmax)
    n = np.arange(nmax + 1)
    labels = np.stack([n + occ, n], axis=1)
    amps = ex.a if occ == 0 else ex.abar
    keep = amps != 0
    deficit = _tail_fraction(math.tanh(r) ** 2, nmax, occ == 1)
    factors = (Factor(mode, "I"), Factor(mode, "II"))
    return LabeledState(factors, labels[keep], amps[keep],
                        {f"nmax[{mode}]": nmax, f"deficit[{mode}]": deficit})


def charged_boson_unruh_state(occ, r: float, nmax: int, mode: str = MODE_1) -> LabeledState:
    """Charged bosonic Unruh vacuum (occ=0) or one-particle state (occ='+' or '-').

    Factors are particle-I, antiparticle-I, antiparticle-II, particle-II,
    mirroring the fermionic convention that a region-I particle is paired
    with a region-II antiparticle.  Terms are kept for ``n + m <= nmax``.
    """
    if occ not in (0, "+", "-"):
        raise ValueError("occ must be 0, '+' or '-'")
    t, ch = math.tanh(r), math.cosh(r)
    n, m = np.meshgrid(np.arange(nmax + 1), np.arange(nmax + 1), indexing="ij")
    sel = (n + m) <= nmax
    n, m = n[sel], m[sel]
    with np.errstate(under="ignore"):
        pw = t ** (n + m) if t > 0 else ((n + m) == 0).astype(float)
    if occ == 0:
        labels = np.stack([n, m, n, m], axis=1)
        amps = pw / ch**2
    elif occ == "+":
        labels = np.stack([n + 1, m, n, m], axis=1)
        amps = pw * np.sqrt(n + 1.0) / ch**3
    else:
        labels = np.stack([n, m + 1, n, m], axis=1)
        amps = pw * np.sqrt(m + 1.0) / ch**3
    keep = amps != 0
    deficit = max(0.0, 1.0 - float(np.sum(amps**2)))
    factors = (Factor(mode, "I", "+"), Factor(mode, "I", "-"),
               Factor(mode, "II", "-"), Factor(mode, "II", "+"))
    return LabeledState(factors, labels[keep], amps[keep],
                        {f"nmax[{mode}]": nmax, f"deficit[{mode}]": deficit})


def fermion_unruh_state(occ, r_f: float, mode: str = MODE_2) -> LabeledState:
    """Dirac-fermion Unruh vacuum or one-(anti)particle state, exact.

    Factor order: particle-I, antiparticle-II, antiparticle-I, particle-II.
    """
    if not -1e-15 <= r_f <= math.pi / 4 + 1e-15:
        raise ValueError("r_f must lie in [0, pi/4]")
    c, s = math.cos(r_f), math.sin(r_f)
    if occ == 0:
        terms = {(0, 0, 0, 0): c * c, (0, 0, 1, 1): -c * s, (1, 1, 0, 0): c * s, (1, 1, 1, 1): -s * s}
    elif occ == "+":
        terms = {(1, 0, 0, 0): c, (1, 0, 1, 1): -s}
    elif occ == "-":
        terms = {(0, 0, 1, 0): c, (1, 1, 1, 0): s}
    else:
        raise ValueError("occ must be 0, '+' or '-'")
    terms = {k: v for k, v in terms.items() if v != 0}
    factors = (Factor(mode, "I", "+", True), Factor(mode, "II", "-", True),
               Factor(mode, "I", "-", True), Factor(mode, "II", "+", True))
    return LabeledState(factors, np.array(list(terms)), np.array(list(terms.values())))


def _mode_state(stat: Statistics, occ, r: float, nmax: int, mode: str) -> LabeledState:
    if stat is Statistics.FERMION:
        return fermion_unruh_state(occ, r, mode)
    if stat is Statistics.CHARGED_BOSON:
        return charged_boson_unruh_state(occ, r, nmax, mode)
    return boson_unruh_state(occ, r, nmax, mode)


def family_state(kind, r1: float, r2: float, nmax: int = 60, sign: int = +1,
                 alpha: float = math.pi / 4) -> LabeledState:
    """Joint region I/II state of a family, given the acceleration parameters directly.

    ``r1`` belongs to mode omega and ``r2`` to mode Omega (``r`` for bosons,
    ``r_f`` for fermions).  The state metadata records the cutoff and the
    norm deficit ``1 - <psi|psi>``.
    """
    kind = Kind.parse(kind)
    s1, s2 = kind.statistics
    (o11, o12), (o21, o22) = _CONSTITUENTS[kind]
    c1 = tensor(_mode_state(s1, o11, r1, nmax, MODE_1), _mode_state(s2, o12, r2, nmax, MODE_2))
    c2 = tensor(_mode_state(s1, o21, r1, nmax, MODE_1), _mode_state(s2, o22, r2, nmax, MODE_2))
    if kind.has_alpha:
        w1, w2 = math.sin(alpha), sign * math.cos(alpha)
    else:
        w1, w2 = 1 / math.sqrt(2), sign / math.sqrt(2)
    psi = superpose([c1, c2], [w1, w2])
    meta = {k: v for k, v in psi.meta.items() if k.startswith("nmax")}
    meta["norm_deficit"] = max(0.0, 1.0 - psi.norm_squared)
    if not (s1.is_bosonic or s2.is_bosonic):
        meta["norm_deficit"] = 0.0
    return LabeledState(psi.factors, psi.labels, psi.amplitudes, meta)


def required_nmax(kind, r1: float, r2: float, norm_tol: float = 1e-8,
                  start: int = 20, max_nmax: int = 4096) -> int:
    """Smallest cutoff in the doubling sequence start, 2*start, ... meeting ``norm_tol``.

    Uses the exact tail weights of the neutral expansions; the charged
    expansion's tail is bounded by the same formula applied to n + m with
    an extra factor for the two-index degeneracy.
    """
    kind = Kind.parse(kind)
    t2 = [math.tanh(r) ** 2 if st.is_bosonic else 0.0 for r, st in zip((r1, r2), kind.statistics)]
    charged = kind is Kind.X2
    n = start
    while True:
        tails = []
        for x in t2:
            if x == 0:
                tails.append(0.0)
            elif charged:
                # sum_{k>N} (k+1)(k+2) (1-x)^3 x^k  <=  x^(N+1) (N+3)^2 for x < 1
                tails.append(x ** (n + 1) * (n + 3) ** 2)
            else:
                tails.append(_tail_fraction(x, n, True))
        if sum(tails) < norm_tol or n >= max_nmax:
            return n
        n *= 2


def build_state(family: StateFamily, truncation: Truncation | int | None = None) -> LabeledState:
    """Joint state of a family at its modes' accelerations.

    A fixed integer or ``Truncation.nmax`` sets the cutoff; otherwise the
    smallest doubling cutoff that meets the norm tolerance is used.
    """
    r1, r2 = family.r_params
    if isinstance(truncation, int):
        nmax = truncation
    else:
        tr = truncation or Truncation()
        nmax = tr.nmax or required_nmax(family.kind, r1, r2, tr.norm_tol, tr.start, tr.max_nmax)
    return family_state(family.kind, r1, r2, nmax, family.sign, family.alpha)


def reduce_to_region_I(state: LabeledState, trace_antiparticles: bool = False) -> DensityMatrix:
    """Trace out region II (and optionally the region-I antiparticles of fermions)."""
    if trace_antiparticles:
        keep = lambda f: f.region == "I" and not (f.fermionic and f.species == "-")  # noqa: E731
    else:
        keep = lambda f: f.region == "I"  # noqa: E731
    return reduce_pure(state, keep)
