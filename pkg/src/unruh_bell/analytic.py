"""Closed-form negativities, correction series, vanishing conditions and limits.

This is the formula layer.  Each function takes the observers' frequencies
and accelerations; the ``*_r`` variants take the acceleration parameters
``r`` (bosons) or ``r_f`` (fermions) directly.

Bosonic families have a *leading* negativity from the block in which the
entanglement starts, plus a correction series over further 2x2 blocks of
the partially transposed state.  Every series term is evaluated from the
entries of its 2x2 block, written with the powers of ``tanh`` rearranged
so that no ``0/0`` appears at r = 0 (``tanh^(2n) / sinh^2 = tanh^(2n-2) / cosh^2``),
and its negativity is taken as ``max(0, (c^2 - ab) / ((a+b)/2 + sqrt(((a-b)/2)^2 + c^2)))``,
a cancellation-free form of the negative eigenvalue.

Known limitation: for the boson-boson families the 2x2 blocks summed here
are the sub-blocks of a block structure the exact partial transpose does
not have; its true blocks are longer chains.  The numeric path in
:mod:`unruh_bell.entanglement` is the reference, and the two disagree for
those two families (see the tests).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .thermo import Statistics, accel_param, occupation, helmholtz_free_energy

__all__ = [
    "SeriesConfig",
    "SeriesNegativity",
    "SeriesConvergenceError",
    "GammaKind",
    "neg2x2",
    "family_negativity_r",
    "neg_ff",
    "neg_ff_r",
    "neg_f_single",
    "factorization_check_ff",
    "phi_bb_block",
    "psi_bb_block",
    "bf_block",
    "x1_block",
    "neg_bb",
    "neg_bb_r",
    "neg_x",
    "neg_x_r",
    "neg_bf",
    "neg_bf_r",
    "gamma",
    "general_bell_negativity",
    "general_bell_negativity_r",
    "entanglement_condition",
    "helmholtz_condition",
    "asymptotic_limits",
]

_B, _F = Statistics.BOSON, Statistics.FERMION


@dataclass(frozen=True)
class SeriesConfig:
    term_tol: float = 1e-14
    max_terms: int = 10000

    def __post_init__(self):
        if not self.term_tol > 0:
            raise ValueError("term_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


class SeriesConvergenceError(RuntimeError):
    pass


class SeriesNegativity(tuple):
    """``(leading, total)`` pair carrying the series bookkeeping as attributes.

    Attributes: ``n_terms`` (terms evaluated), ``converged`` (the term
    envelope fell below ``term_tol``), ``tail_bound`` (geometric estimate of
    the discarded tail), ``bounded`` (every correction term was at most
    the leading-block value) and ``sector0`` (negativity of the leading block
    itself, which can differ from ``leading`` when the closed form is only
    approximate).
    """

    def __new__(cls, leading, total, n_terms=0, converged=True, tail_bound=0.0,
                bounded=True, sector0=None):
        obj = super().__new__(cls, (float(leading), float(total)))
        obj.n_terms = n_terms
        obj.converged = converged
        obj.tail_bound = tail_bound
        obj.bounded = bounded
        obj.sector0 = float(leading if sector0 is None else sector0)
        return obj

    @property
    def leading(self) -> float:
        return self[0]

    @property
    def total(self) -> float:
        return self[1]


def neg2x2(a: float, b: float, c: float) -> float:
    """Negativity contribution of the Hermitian block [[a, c], [c, b]] with a, b >= 0."""
    c2 = c * c
    num = c2 - a * b
    if num <= 0:
        return 0.0
    return num / (0.5 * (a + b) + math.hypot(0.5 * (a - b), c))


def _pw(t2: float, k: int) -> float:
    """t2**k with 0**0 = 1 and negative powers only ever reached with zero weight."""
    if k < 0:
        return 0.0
    return t2 ** k if t2 > 0 or k > 0 else 1.0


def _trig(r):
    t, ch, sh = math.tanh(r), math.cosh(r), math.sinh(r)
    return t * t, ch * ch, sh * sh


# ----------------------------------------------------------------- fermions

def neg_ff_r(kind: str, r1: float, r2: float) -> float:
    """Fermion-fermion negativity from the two r_f parameters (each in [0, pi/4])."""
    kind = _kind(kind)
    c1, c2 = math.cos(r1) ** 2, math.cos(r2) ** 2
    if kind == "Phi":
        return 0.5 * c1 * c2
    nbar = 0.5 * (math.sin(r1) ** 2 + math.sin(r2) ** 2)
    return 0.5 * (c1 * c2) / (math.sqrt(c1 * c2 + nbar * nbar) + nbar)


def neg_ff(kind: str, omega: float, Omega: float, a_omega: float, a_Omega: float) -> float:
    """Fermion-fermion Bell-state negativity.

    Psi: (1/2)(sqrt(1/(Z1 Z2) + nbar^2) - nbar) with nbar the mean Fermi-Dirac
    occupation.  Phi: 1/(2 Z1 Z2).
    """
    return neg_ff_r(kind, accel_param(_F, omega, a_omega), accel_param(_F, Omega, a_Omega))


def neg_f_single(r_f: float) -> float:
    """Negativity when only one fermionic observer accelerates: cos^2(r_f) / 2."""
    if not -1e-15 <= r_f <= math.pi / 4 + 1e-15:
        raise ValueError("r_f must lie in [0, pi/4]")
    return 0.5 * math.cos(r_f) ** 2


def factorization_check_ff(r1: float, r2: float) -> float:
    """|N_Phi(r1, r2) - 2 N_f(r1) N_f(r2)|."""
    return abs(neg_ff_r("Phi", r1, r2) - 2.0 * neg_f_single(r1) * neg_f_single(r2))


def _kind(kind) -> str:
    k = str(getattr(kind, "value", kind)).lower()
    if k.startswith("psi"):
        return "Psi"
    if k.startswith("phi"):
        return "Phi"
    if k in ("x1", "x2"):
        return k.upper()
    raise ValueError(f"kind must be Psi or Phi, got {kind!r}")


# ------------------------------------------------------------- 2x2 blocks

def phi_bb_block(r1: float, r2: float, n: int, m: int) -> float:
    """Negativity of the (n, m) two-by-two block for the boson-boson Phi state."""
    t1, c1, _ = _trig(r1)
    t2, c2, _ = _trig(r2)
    pre = 0.5 * _pw(t1, n) * _pw(t2, m) / (c1 * c2)
    a = pre * t2 + 0.5 * (m + 1) * n * _pw(t1, n - 1) * _pw(t2, m) / (c1 * c2) ** 2
    b = pre * t1 + 0.5 * (n + 1) * m * _pw(t1, n) * _pw(t2, m - 1) / (c1 * c2) ** 2
    c = pre * math.sqrt((m + 1) * (n + 1) / (c1 * c2))
    return neg2x2(a, b, c)


def psi_bb_block(r1: float, r2: float, n: int, m: int) -> float:
    """Negativity of the (n, m) two-by-two block for the boson-boson Psi state."""
    t1, c1, _ = _trig(r1)
    t2, c2, _ = _trig(r2)
    pre = 0.5 * _pw(t1, n) * _pw(t2, m) / (c1 * c2)
    a = 0.5 * (m * _pw(t1, n) * _pw(t2, m - 1) / (c1 * c2 * c2)
               + n * _pw(t1, n - 1) * _pw(t2, m) / (c1 * c1 * c2))
    b = pre * ((m + 1) * t1 / c2 + (n + 1) * t2 / c1)
    c = pre * math.sqrt((m + 1) * (n + 1) / (c1 * c2))
    return neg2x2(a, b, c)


def bf_block(kind: str, r: float, r_f: float, n: int) -> float:
    """Boson-fermion block n, including the (1 + tan^2 r_f) weight of its partner block."""
    kind = _kind(kind)
    t, ch, _ = _trig(r)
    cf, sf = math.cos(r_f) ** 2, math.sin(r_f) ** 2
    pre = 0.5 * cf * _pw(t, n) / ch
    n_over_sh = n * _pw(t, n - 1) / ch ** 2 * 0.5 * cf  # pre * n / sinh^2
    c = pre * math.sqrt(cf * (n + 1) / ch)
    if kind == "Phi":
        a = pre * cf * t
        b = n_over_sh + pre * sf
    elif kind == "Psi":
        a = cf * n_over_sh
        b = pre * ((n + 1) / ch * sf + t)
    else:
        raise ValueError("boson-fermion block needs Psi or Phi")
    return (1.0 + math.tan(r_f) ** 2) * neg2x2(a, b, c)


def x1_block(r: float, r_f: float, n: int) -> float:
    """Negativity of block n of the X1 state (bosonic mode accelerated, fermion factor cos^2)."""
    t, ch, _ = _trig(r)
    cf = math.cos(r_f) ** 2
    pre = 0.5 * cf * _pw(t, n) / ch
    a = 0.5 * cf * n * _pw(t, n - 1) / ch ** 2
    b = pre * t
    c = pre * math.sqrt((n + 1) / ch)
    return neg2x2(a, b, c)


# ---------------------------------------------------------------- series

def _sum_series(term: Callable[[int], tuple], leading_block: float, ratio: float,
                series: SeriesConfig):
    """Sum terms n = 1, 2, ...; ``term(n)`` returns (negativity, envelope).

    The envelope bounds the magnitude of the term (it is the off-diagonal
    block entry, which dominates the negative eigenvalue).  Summation stops
    once the envelope is below ``term_tol`` and decreasing.
    """
    vals, bounded = [], True
    prev_env = math.inf
    n = 0
    converged = False
    env = math.inf
    for n in range(1, series.max_terms + 1):
        v, env = term(n)
        vals.append(v)
        if v > leading_block * (1 + 1e-12) + 1e-300:
            bounded = False
        if env < series.term_tol and env <= prev_env:
            converged = True
            break
        prev_env = env
    q = min(ratio, 1 - 1e-16)
    tail = env * q / (1 - q) if math.isfinite(env) else math.inf
    return math.fsum(vals), n, converged, tail, bounded


def _envelope(t2: float, ch2: float, n: int, extra: float = 1.0) -> float:
    return 0.5 * _pw(t2, n) * math.sqrt(n + 1.0) * extra / ch2 ** 1.5


def neg_bb_r(kind: str, r1: float, r2: float, series: SeriesConfig = SeriesConfig()) -> SeriesNegativity:
    """Boson-boson Bell-state negativity from the two bosonic r parameters.

    Phi: leading = (1/2) Z1^-2 Z2^-2 (1 - n1 n2) clamped at 0, plus the
    (n, 0) and (0, m) block series.  Psi: leading from the (0, 0) block,
    plus the (n, 0) series along the more strongly accelerated mode, which
    vanishes identically when r1 == r2.
    """
    kind = _kind(kind)
    t1, c1, s1 = _trig(r1)
    t2, c2, s2 = _trig(r2)
    if kind == "Phi":
        leading = max(0.0, 0.5 / (c1 * c2) ** 2 * (1.0 - s1 * s2))
        sa = _sum_series(lambda n: (phi_bb_block(r1, r2, n, 0), _envelope(t1, c1, n) / c2 ** 1.5),
                         leading, t1, series)
        sb = _sum_series(lambda m: (phi_bb_block(r1, r2, 0, m), _envelope(t2, c2, m) / c1 ** 1.5),
                         leading, t2, series)
        return SeriesNegativity(leading, leading + sa[0] + sb[0], sa[1] + sb[1],
                                sa[2] and sb[2], sa[3] + sb[3], sa[4] and sb[4])
    leading = psi_bb_block(r1, r2, 0, 0)
    if r1 == r2:
        return SeriesNegativity(leading, leading)
    if r1 > r2:
        term = lambda n: (psi_bb_block(r1, r2, n, 0), _envelope(t1, c1, n) / c2 ** 1.5)  # noqa: E731
        ratio = t1
    else:
        term = lambda m: (psi_bb_block(r1, r2, 0, m), _envelope(t2, c2, m) / c1 ** 1.5)  # noqa: E731
        ratio = t2
    s, n, conv, tail, bounded = _sum_series(term, leading, ratio, series)
    return SeriesNegativity(leading, leading + s, n, conv, tail, bounded)


def neg_bb(kind: str, omega: float, Omega: float, a_omega: float, a_Omega: float,
           series: SeriesConfig = SeriesConfig()) -> SeriesNegativity:
    return neg_bb_r(kind, accel_param(_B, omega, a_omega), accel_param(_B, Omega, a_Omega), series)


def neg_x_r(kind: str, r: float, r_f: float, series: SeriesConfig = SeriesConfig()) -> SeriesNegativity:
    """Negativity of the states X1, X2 (boson mode r, fermion mode r_f).

    Both factorize into the one-observer fermionic negativity cos^2(r_f)/2
    times a bosonic part: X1 uses 1/(2 Z_B^2) plus the block series, X2
    the closed form 1/(2 Z_B).
    """
    kind = _kind(kind)
    t, ch, _ = _trig(r)
    two_nf = 2.0 * neg_f_single(r_f)
    if kind == "X2":
        v = two_nf * 0.5 / ch
        return SeriesNegativity(v, v)
    if kind != "X1":
        raise ValueError("kind must be X1 or X2")
    leading = two_nf * 0.5 / ch ** 2
    s, n, conv, tail, bounded = _sum_series(
        lambda k: (x1_block(r, r_f, k), two_nf * _envelope(t, ch, k)), leading, t, series)
    return SeriesNegativity(leading, leading + s, n, conv, tail, bounded)


def neg_x(kind: str, omega: float, Omega: float, a_omega: float, a_Omega: float,
          series: SeriesConfig = SeriesConfig()) -> SeriesNegativity:
    stat = Statistics.CHARGED_BOSON if _kind(kind) == "X2" else _B
    return neg_x_r(kind, accel_param(stat, omega, a_omega), accel_param(_F, Omega, a_Omega), series)


def _phi_bf_leading(r: float, r_f: float) -> float:
    """(1/2) cos^2(r_f) / Z_B^2 * (sqrt(n_B / n_F) - n_B), clamped, with its limit branches."""
    _, ch, sh = _trig(r)
    nf = math.sin(r_f) ** 2
    if nf == 0.0:
        # 0/0 in sqrt(n_B/n_F): use the leading block itself at r_f = 0
        return bf_block("Phi", r, 0.0, 0)
    return max(0.0, 0.5 * math.cos(r_f) ** 2 / ch ** 2 * (math.sqrt(sh / nf) - sh))


def neg_bf_r(kind: str, r: float, r_f: float, series: SeriesConfig = SeriesConfig()) -> SeriesNegativity:
    """Boson-fermion Bell-state negativity (boson mode r, fermion mode r_f).

    ``leading`` is the compact closed form (gamma clamped at 0).  The total
    is the sum over all blocks n = 0, 1, ...; for Psi the n = 0 block equals
    the closed form, for Phi the closed form shares the block's zero set
    but not its magnitude, so the block value (``sector0``) is what enters
    the total.
    """
    kind = _kind(kind)
    t, ch, _ = _trig(r)
    block0 = bf_block(kind, r, r_f, 0)
    if kind == "Psi":
        leading = 0.5 * math.cos(r_f) ** 2 / ch ** 2
    else:
        leading = _phi_bf_leading(r, r_f)
    weight = 1.0 + math.tan(r_f) ** 2
    s, n, conv, tail, bounded = _sum_series(
        lambda k: (bf_block(kind, r, r_f, k), weight * _envelope(t, ch, k)), block0, t, series)
    return SeriesNegativity(leading, block0 + s, n, conv, tail, bounded, sector0=block0)


def neg_bf(kind: str, omega: float, Omega: float, a_omega: float, a_Omega: float,
           series: SeriesConfig = SeriesConfig()) -> SeriesNegativity:
    return neg_bf_r(kind, accel_param(_B, omega, a_omega), accel_param(_F, Omega, a_Omega), series)


def family_negativity_r(kind, r1: float, r2: float, series: SeriesConfig = SeriesConfig()) -> SeriesNegativity:
    """Closed-form (leading, total) for any Bell or X family from its two parameters.

    ``kind`` is a family name such as ``"Phi_BB"``.  The alpha families have
    no closed form at nonzero acceleration and raise ValueError.
    """
    name = str(getattr(kind, "value", kind))
    if "alpha" in name:
        raise ValueError("no closed form for the alpha families away from zero acceleration")
    if name in ("X1", "X2"):
        return neg_x_r(name, r1, r2, series)
    if name.endswith("FF"):
        v = neg_ff_r(name, r1, r2)
        return SeriesNegativity(v, v)
    if name.endswith("BF"):
        return neg_bf_r(name, r1, r2, series)
    if name.endswith("BB"):
        return neg_bb_r(name, r1, r2, series)
    raise ValueError(f"unknown family {name!r}")


# ------------------------------------------------------- compact form, gamma

class GammaKind(enum.Enum):
    PSI_BB = "Psi_BB"
    PSI_BF = "Psi_BF"
    PSI_FF = "Psi_FF"
    PHI_BB = "Phi_BB"
    PHI_BF = "Phi_BF"
    PHI_FF = "Phi_FF"

    @classmethod
    def parse(cls, value) -> "GammaKind":
        if isinstance(value, cls):
            return value
        for k in cls:
            if k.value.lower() == str(getattr(value, "value", value)).lower():
                return k
        raise ValueError(f"unknown state tag {value!r}")

    @property
    def statistics(self):
        pair = self.value[-2:]
        return tuple(_B if c == "B" else _F for c in pair)


def _thermal(stat, r):
    """(partition, occupation) expressed through the acceleration parameter."""
    if stat is _F:
        return 1.0 / math.cos(r) ** 2, math.sin(r) ** 2
    return math.cosh(r) ** 2, math.sinh(r) ** 2


def gamma(tag, r1: float, r2: float) -> float:
    """Structure function gamma of the compact negativity form (not clamped)."""
    tag = GammaKind.parse(tag)
    s1, s2 = tag.statistics
    z1, n1 = _thermal(s1, r1)
    z2, n2 = _thermal(s2, r2)
    nbar = 0.5 * (n1 + n2)
    if tag is GammaKind.PSI_BB:
        return math.sqrt(z1 * z2 + nbar ** 2) - nbar
    if tag is GammaKind.PSI_FF:
        zz = z1 * z2
        return math.sqrt(zz + zz * zz * nbar ** 2) - zz * nbar
    if tag in (GammaKind.PSI_BF, GammaKind.PHI_FF):
        return 1.0
    if tag is GammaKind.PHI_BB:
        return 1.0 - n1 * n2
    if n2 == 0.0:
        raise ZeroDivisionError("gamma for Phi_BF is 0/0 at n_F = 0")
    return math.sqrt(n1 / n2) - n1


def general_bell_negativity_r(tag, r1: float, r2: float) -> float:
    """(1/2) Z1^-x Z2^-y gamma, clamped at 0 (x, y = 1 for fermions, 2 for bosons)."""
    tag = GammaKind.parse(tag)
    if tag is GammaKind.PHI_BF and math.sin(r2) == 0.0:
        return _phi_bf_leading(r1, r2)
    s1, s2 = tag.statistics
    z1, _ = _thermal(s1, r1)
    z2, _ = _thermal(s2, r2)
    x = 1 if s1 is _F else 2
    y = 1 if s2 is _F else 2
    return max(0.0, 0.5 / (z1 ** x * z2 ** y) * gamma(tag, r1, r2))


def general_bell_negativity(tag, omega: float, Omega: float, a_omega: float, a_Omega: float) -> float:
    tag = GammaKind.parse(tag)
    s1, s2 = tag.statistics
    return general_bell_negativity_r(tag, accel_param(s1, omega, a_omega), accel_param(s2, Omega, a_Omega))


# -------------------------------------------------------------- conditions

def _pair_kind(kind) -> str:
    k = str(getattr(kind, "value", kind)).upper()
    k = k[-2:] if len(k) > 2 else k
    if k not in ("BB", "BF"):
        raise ValueError("kind must be BB or BF")
    return k


def entanglement_condition(kind, omega: float, Omega: float, a_omega: float, a_Omega: float):
    """Whether the Phi-type state keeps entanglement, with the condition's margin.

    BB: margin = 1 - exp(-omega/T_omega) - exp(-Omega/T_Omega).
    BF: margin = 1 - n_B(omega) n_F(Omega).
    Entangled means margin > 0.
    """
    k = _pair_kind(kind)
    if k == "BB":
        if not (omega > 0 and Omega > 0 and a_omega >= 0 and a_Omega >= 0):
            raise ValueError("invalid mode parameters")
        e1 = math.exp(-2 * math.pi * omega / a_omega) if a_omega > 0 else 0.0
        e2 = math.exp(-2 * math.pi * Omega / a_Omega) if a_Omega > 0 else 0.0
        margin = 1.0 - e1 - e2
    else:
        margin = 1.0 - occupation(_B, omega, a_omega) * occupation(_F, Omega, a_Omega)
    return margin > 0, margin


class HelmholtzCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool
    partner_lhs: float = math.nan
    partner_rhs: float = math.nan
    partner_holds: bool = True


def helmholtz_condition(kind, omega: float, Omega: float, a: float) -> HelmholtzCheck:
    """The entanglement condition at equal accelerations, in free-energy form.

    BB: omega >= -F(Omega), reported with the partner check Omega >= -F(omega).
    BF: omega + Omega >= -F_B(omega) + F_F(Omega).
    At a = 0 the free energies take their limit 0.
    """
    k = _pair_kind(kind)
    if isinstance(a, (tuple, list)):
        if len(a) != 2 or a[0] != a[1]:
            raise ValueError("helmholtz_condition needs equal accelerations")
        a = a[0]

    def F(stat, w):
        return 0.0 if a == 0 else helmholtz_free_energy(stat, w, a)

    if k == "BB":
        lhs, rhs = omega, -F(_B, Omega)
        plhs, prhs = Omega, -F(_B, omega)
        return HelmholtzCheck(lhs, rhs, lhs >= rhs, plhs, prhs, plhs >= prhs)
    lhs, rhs = omega + Omega, -F(_B, omega) + F(_F, Omega)
    return HelmholtzCheck(lhs, rhs, lhs >= rhs)


# ----------------------------------------------------------------- limits

def asymptotic_limits() -> dict:
    """Infinite-acceleration constants of the fermion-fermion states.

    Negativities and entropies in nats, mutual information in bits.
    """
    r2 = math.sqrt(2.0)
    p, m = 3 + 2 * r2, 3 - 2 * r2
    s_phi = (math.log(32) / 4 - p / 8 * math.log(p / 32) + (2 * r2 - 3) / 8 * math.log(m / 32))
    i_phi = (-math.log(531441 / 256) + p * math.log(p) + m * math.log(m)) / (8 * math.log(2))
    return {
        "N_Phi_FF": 0.125,
        "N_Psi_FF": (r2 - 1) / 4,
        "S_Phi_FF": s_phi,
        "S_Psi_FF": math.log(8),
        "I_Phi_FF": i_phi,
        "I_Psi_FF": math.log(8 / (3 * math.sqrt(3))) / math.log(2),
    }

