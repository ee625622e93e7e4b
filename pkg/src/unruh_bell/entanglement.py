"""Numeric entanglement and correlation measures of reduced two-mode states.

The negativity is obtained by brute force: partially transpose the
region-I density matrix on one observer's factors, split the result into
its connected blocks and add up the magnitudes of the negative
eigenvalues.  Each block with a negative eigenvalue is reported as a
*sector*.  Two-dimensional blocks are labelled by the coherence they come
from, e.g. ``0,0|1+,1+`` for the coherence between "both modes empty" and
"both modes carry a particle"; larger blocks get a ``chain@`` label naming
their first basis state.

Entropies are in nats, mutual information in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .fock import (
    BLOCK_THRESHOLD,
    EIG_FLOOR,
    DensityMatrix,
    block_spectra,
    partial_trace,
    partial_transpose,
)
from .states import (
    MODE_2,
    Kind,
    StateFamily,
    Truncation,
    family_state,
    reduce_to_region_I,
    required_nmax,
)

__all__ = [
    "NegativityReport",
    "CorrelationReport",
    "negativity",
    "sector_negativities",
    "von_neumann_entropy",
    "mutual_information",
    "correlations",
    "family_negativity",
    "family_correlations",
    "ENTROPY_FLOOR",
]

ENTROPY_FLOOR = 1e-14


@dataclass
class NegativityReport:
    total: float
    sectors: list = field(default_factory=list)
    truncation_meta: dict = field(default_factory=dict)
    eig_floor: float = EIG_FLOOR

    def sector_dict(self) -> dict:
        out: dict = {}
        for label, v in self.sectors:
            out[label] = out.get(label, 0.0) + v
        return out


@dataclass
class CorrelationReport:
    entropy_nats: float
    marginal_entropies: tuple
    mutual_information_bits: float


def _party(party_split):
    return party_split if party_split is not None else MODE_2


def _mode_part(factors, row, mode) -> str:
    parts = []
    for f, n in zip(factors, row):
        if f.mode != mode:
            continue
        n = int(n)
        if f.species == "0":
            parts.append(str(n))
        elif n:
            parts.append(("1" if f.fermionic else str(n)) + f.species)
    return "".join(parts) if parts else "0"


def _side(factors, row, modes) -> str:
    return ",".join(_mode_part(factors, row, m) for m in modes)


def _side_weight(row) -> tuple:
    return (int(np.sum(row)),)


def _sector_label(factors, labels: np.ndarray, transposed: np.ndarray, modes) -> str:
    """Label a block of the partial transpose.

    For a 2x2 block with basis {(a, b'), (a', b)} the underlying coherence
    of the original matrix is between (a, b) and (a', b'); the two sides
    are listed in order of increasing total occupation.
    """
    if len(labels) == 2:
        x, y = labels
        s1, s2 = x.copy(), y.copy()
        s1[transposed], s2[transposed] = y[transposed], x[transposed]
        sides = sorted([s1, s2], key=lambda s: (_side_weight(s), _side(factors, s, modes)))
        return "|".join(_side(factors, s, modes) for s in sides)
    first = min(labels.tolist())
    return "chain@" + _side(factors, np.array(first), modes)


def _modes_in_order(factors) -> list:
    seen = []
    for f in factors:
        if f.mode not in seen:
            seen.append(f.mode)
    return seen


def negativity(rho: DensityMatrix, party_split=None, eig_floor: float = EIG_FLOOR,
               threshold: float = BLOCK_THRESHOLD) -> NegativityReport:
    """Negativity with its per-sector breakdown.

    ``party_split`` selects the factors to transpose: a mode label, a
    collection of mode labels, or a predicate on factors.  By default the
    mode Omega is transposed.
    """
    party = _party(party_split)
    pt = partial_transpose(rho, party)
    sel = np.array([_predicate(party)(f) for f in rho.factors], dtype=bool)
    if sel.all() or not sel.any():
        raise ValueError("party split must select some but not all factors")
    modes = _modes_in_order(rho.factors)
    sectors = []
    for idx, ev in block_spectra(pt.matrix, threshold):
        neg = ev[ev < -eig_floor]
        if len(neg):
            label = _sector_label(pt.factors, pt.labels[idx], sel, modes)
            sectors.append((label, float(-neg.sum())))
    sectors.sort(key=lambda s: -s[1])
    total = float(math.fsum(v for _, v in sectors))
    return NegativityReport(total, sectors, dict(rho.meta), eig_floor)


def _predicate(party):
    if callable(party):
        return party
    if isinstance(party, str):
        return lambda f: f.mode == party
    modes = set(party)
    return lambda f: f.mode in modes


def sector_negativities(rho: DensityMatrix, party_split=None, **kw) -> list:
    return negativity(rho, party_split, **kw).sectors


def _entropy_from_eigs(ev: np.ndarray, floor: float) -> float:
    ev = ev[ev > floor]
    return float(-np.sum(ev * np.log(ev)))


def von_neumann_entropy(rho: DensityMatrix, floor: float = ENTROPY_FLOOR) -> float:
    """-sum lambda ln lambda in nats; eigenvalues below ``floor`` contribute 0."""
    return max(0.0, _entropy_from_eigs(rho.eigenvalues(), floor))


def correlations(rho: DensityMatrix, party_split=None, floor: float = ENTROPY_FLOOR) -> CorrelationReport:
    """Joint entropy, both marginal entropies and the mutual information."""
    party = _predicate(_party(party_split))
    rho_b = partial_trace(rho, party)
    rho_a = partial_trace(rho, lambda f: not party(f))
    s = von_neumann_entropy(rho, floor)
    sa, sb = von_neumann_entropy(rho_a, floor), von_neumann_entropy(rho_b, floor)
    mi = max(0.0, (sa + sb - s) / math.log(2))
    return CorrelationReport(s, (sa, sb), mi)


def mutual_information(rho: DensityMatrix, party_split=None, floor: float = ENTROPY_FLOOR) -> float:
    """I = [S(rho_omega) + S(rho_Omega) - S(rho)] / ln 2, in bits."""
    return correlations(rho, party_split, floor).mutual_information_bits


def _resolve(target, r2=None, sign=+1, alpha=math.pi / 4):
    if isinstance(target, StateFamily):
        r1, r2 = target.r_params
        return target.kind, r1, r2, target.sign, target.alpha
    return Kind.parse(target), float(r2[0]), float(r2[1]), sign, alpha


def _has_boson(kind: Kind) -> bool:
    return any(s.is_bosonic for s in kind.statistics)


def family_negativity(target, r=None, *, sign: int = +1, alpha: float = math.pi / 4,
                      truncation: Truncation | int | None = None, party_split=None,
                      trace_antiparticles: bool = False,
                      eig_floor: float = EIG_FLOOR) -> NegativityReport:
    """Numeric negativity of a state family with adaptive bosonic truncation.

    ``target`` is a :class:`StateFamily`, or a family name with ``r`` the
    pair of acceleration parameters ``(r_omega, r_Omega)``.  The metadata
    records the cutoff used, the norm deficit, the negativity shift seen
    under the last doubling and whether the truncation converged.
    """
    kind, r1, r2, sign, alpha = _resolve(target, r, sign, alpha)

    def evaluate(nmax):
        psi = family_state(kind, r1, r2, nmax, sign, alpha)
        rho = reduce_to_region_I(psi, trace_antiparticles)
        return negativity(rho, party_split, eig_floor)

    if not _has_boson(kind):
        rep = evaluate(1)
        rep.truncation_meta = {"nmax": 0, "norm_deficit": 0.0, "shift": 0.0, "converged": True}
        return rep
    if isinstance(truncation, int) or (truncation is not None and truncation.nmax):
        nmax = truncation if isinstance(truncation, int) else truncation.nmax
        norm_tol = truncation.norm_tol if isinstance(truncation, Truncation) else Truncation().norm_tol
        rep = evaluate(nmax)
        deficit = rep.truncation_meta.get("norm_deficit", 0.0)
        # a fixed cutoff is taken as given; it only counts as converged if the norm is retained
        rep.truncation_meta = {"nmax": nmax, "norm_deficit": deficit, "shift": float("nan"),
                               "converged": deficit < norm_tol}
        return rep
    tr = truncation or Truncation()
    nmax = required_nmax(kind, r1, r2, tr.norm_tol, tr.start, tr.max_nmax)
    if math.tanh(max(r1 if kind.statistics[0].is_bosonic else 0.0,
                     r2 if kind.statistics[1].is_bosonic else 0.0)) == 0.0:
        rep = evaluate(nmax)
        rep.truncation_meta = {"nmax": nmax, "norm_deficit": 0.0, "shift": 0.0, "converged": True}
        return rep
    prev = evaluate(nmax)
    while True:
        nxt = evaluate(2 * nmax)
        shift = abs(nxt.total - prev.total)
        deficit = nxt.truncation_meta.get("norm_deficit", 0.0)
        if (shift < tr.neg_tol and deficit < tr.norm_tol) or 2 * nmax >= tr.max_nmax:
            nxt.truncation_meta = {"nmax": 2 * nmax, "norm_deficit": deficit, "shift": shift,
                                   "converged": shift < tr.neg_tol and deficit < tr.norm_tol}
            return nxt
        nmax, prev = 2 * nmax, nxt


def family_correlations(target, r=None, *, sign: int = +1, alpha: float = math.pi / 4,
                        nmax: int | None = None, party_split=None) -> CorrelationReport:
    """Entropy and mutual information of a family's region-I state.

    Bosonic families use the cutoff that meets the default norm tolerance
    unless ``nmax`` is given.
    """
    kind, r1, r2, sign, alpha = _resolve(target, r, sign, alpha)
    if nmax is None:
        nmax = required_nmax(kind, r1, r2) if _has_boson(kind) else 1
    rho = reduce_to_region_I(family_state(kind, r1, r2, nmax, sign, alpha))
    return correlations(rho, party_split)

