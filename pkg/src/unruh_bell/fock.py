"""Labeled occupation-number bases and the matrix operations built on them.

A basis label is a row of non-negative integers, one occupation per
*factor*.  A factor names the mode it belongs to, the Rindler region
(``"I"`` or ``"II"``), the species (``"0"`` for a neutral boson, ``"+"`` for
a particle, ``"-"`` for an antiparticle) and whether it is fermionic.

States and density matrices are stored sparsely: a state is a list of
labels with amplitudes, a density matrix is a scipy sparse matrix over an
explicit label list.  The bosonic cases reach a few hundred quanta per
mode at large acceleration, where dense matrices over the full truncated
space would not fit in memory, while the matrices themselves are very
sparse and split into small blocks.

Fermionic factors carry an operator-ordering sign.  Amplitudes are stored
against the fixed factor order of the state; reordering factors, and
tracing factors out, multiplies every amplitude by the parity of the
permutation restricted to the occupied fermionic factors.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

__all__ = [
    "Factor",
    "LabeledState",
    "DensityMatrix",
    "Block",
    "EIG_FLOOR",
    "BLOCK_THRESHOLD",
    "format_label",
    "tensor",
    "superpose",
    "permute_factors",
    "density_matrix",
    "partial_trace",
    "reduce_pure",
    "partial_transpose",
    "block_decompose",
    "block_spectra",
    "negativity_from_matrix",
    "write_csv",
]

EIG_FLOOR = 1e-12
BLOCK_THRESHOLD = 1e-14
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class Factor:
    mode: str
    region: str
    species: str = "0"
    fermionic: bool = False

    def __post_init__(self):
        if self.region not in ("I", "II"):
            raise ValueError(f"region must be 'I' or 'II', got {self.region!r}")
        if self.species not in ("0", "+", "-"):
            raise ValueError(f"species must be '0', '+' or '-', got {self.species!r}")

    def __str__(self):
        sp_ = "" if self.species == "0" else self.species
        return f"{self.mode}.{self.region}{sp_}"


def format_label(factors: Sequence[Factor], row) -> str:
    """Human-readable ket, e.g. ``|w.I+=1,w.II-=0>``."""
    return "|" + ",".join(f"{f}={int(n)}" for f, n in zip(factors, row)) + ">"


def _as_predicate(keep) -> Callable[[Factor], bool]:
    if callable(keep):
        return keep
    if isinstance(keep, str):
        return lambda f: f.mode == keep
    if isinstance(keep, (set, frozenset, list, tuple)):
        modes = set(keep)
        return lambda f: f.mode in modes
    raise TypeError(f"cannot interpret {keep!r} as a factor predicate")


def _select(factors: Sequence[Factor], keep) -> np.ndarray:
    pred = _as_predicate(keep)
    mask = []
    for f in factors:
        v = pred(f)
        if not isinstance(v, (bool, np.bool_)):
            raise TypeError("factor predicate must return a bool")
        mask.append(bool(v))
    return np.array(mask, dtype=bool)


def _encode(labels: np.ndarray, radix: np.ndarray | None = None) -> np.ndarray:
    """Map label rows to int64 keys by mixed-radix encoding."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.ndim != 2:
        raise ValueError("labels must be a 2-d array")
    if labels.shape[1] == 0:
        return np.zeros(len(labels), dtype=np.int64)
    if radix is None:
        radix = labels.max(axis=0) + 1 if len(labels) else np.ones(labels.shape[1], np.int64)
    radix = np.maximum(np.asarray(radix, dtype=np.int64), 1)
    if np.prod(radix.astype(float)) >= 2.0**62:
        raise OverflowError("label space too large for int64 keys")
    key = np.zeros(len(labels), dtype=np.int64)
    for c in range(labels.shape[1]):
        key = key * radix[c] + labels[:, c]
    return key


def _unique_rows(labels: np.ndarray):
    """Unique label rows (lexicographic order) and the inverse index."""
    key = _encode(labels)
    _, first, inv = np.unique(key, return_index=True, return_inverse=True)
    return labels[first], inv.ravel()


def _as_label_array(labels, width: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.ndim == 2 and labels.shape[1] == width:
        return labels
    if width == 0:
        raise ValueError("labels of a factorless object must have shape (k, 0)")
    return labels.reshape(-1, width)


@dataclass(frozen=True)
class LabeledState:
    """Sparse pure state: ``amplitudes[k]`` multiplies the ket ``labels[k]``."""

    factors: tuple
    labels: np.ndarray
    amplitudes: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = _as_label_array(self.labels, len(self.factors))
        amps = np.asarray(self.amplitudes)
        if len(labels) != len(amps):
            raise ValueError("labels and amplitudes differ in length")
        for c, f in enumerate(self.factors):
            if f.fermionic and len(labels) and labels[:, c].max() > 1:
                raise ValueError(f"fermionic factor {f} has occupation > 1")
        if len(labels) and labels.min() < 0:
            raise ValueError("occupations must be non-negative")
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def __len__(self):
        return len(self.amplitudes)

    def as_dict(self) -> dict:
        return {tuple(int(x) for x in row): a for row, a in zip(self.labels, self.amplitudes)}


@dataclass(frozen=True)
class DensityMatrix:
    """Sparse density matrix over an explicit list of label rows."""

    factors: tuple
    labels: np.ndarray
    matrix: sp.csr_matrix
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = _as_label_array(self.labels, len(self.factors))
        m = sp.csr_matrix(self.matrix)
        if m.shape != (len(labels), len(labels)):
            raise ValueError("matrix shape does not match the basis size")
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def trace(self) -> float:
        return float(np.real(self.matrix.diagonal().sum()))

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def hermiticity_error(self) -> float:
        d = (self.matrix - self.matrix.conj().T).tocoo()
        return float(np.abs(d.data).max()) if d.nnz else 0.0

    def as_dict(self, tol: float = 0.0) -> dict:
        """Nonzero entries keyed by (row label, column label) tuples."""
        coo = self.matrix.tocoo()
        out = {}
        for i, j, v in zip(coo.row, coo.col, coo.data):
            if abs(v) > tol:
                key = (tuple(int(x) for x in self.labels[i]), tuple(int(x) for x in self.labels[j]))
                out[key] = out.get(key, 0) + v
        return out

    def eigenvalues(self, threshold: float = BLOCK_THRESHOLD) -> np.ndarray:
        """All eigenvalues, computed block by block."""
        comps = block_spectra(self.matrix, threshold)
        return np.concatenate([ev for _, ev in comps]) if comps else np.zeros(0)

    def purity(self) -> float:
        m = self.matrix
        return float(np.real((m.multiply(m.T)).sum()))


def tensor(a, b):
    """Tensor product of two states, or of two density matrices, on disjoint modes.

    The factors of ``b`` are appended after those of ``a``.  Because
    amplitudes refer to this fixed factor order, no fermionic sign appears.
    """
    modes_a = {f.mode for f in a.factors}
    modes_b = {f.mode for f in b.factors}
    if modes_a & modes_b:
        raise ValueError(f"overlapping modes in tensor product: {sorted(modes_a & modes_b)}")
    factors = tuple(a.factors) + tuple(b.factors)
    if isinstance(a, LabeledState) and isinstance(b, LabeledState):
        ka, kb = len(a), len(b)
        labels = np.hstack([np.repeat(a.labels, kb, axis=0), np.tile(b.labels, (ka, 1))])
        amps = np.outer(a.amplitudes, b.amplitudes).ravel()
        meta = {**a.meta, **b.meta}
        return LabeledState(factors, labels, amps, meta)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        da, db = a.dim, b.dim
        labels = np.hstack([np.repeat(a.labels, db, axis=0), np.tile(b.labels, (da, 1))])
        return DensityMatrix(factors, labels, sp.kron(a.matrix, b.matrix, format="csr"),
                             {**a.meta, **b.meta})
    raise TypeError("tensor needs two LabeledState or two DensityMatrix operands")


def superpose(states: Sequence[LabeledState], coeffs: Sequence[complex]) -> LabeledState:
    """Linear combination of states sharing the same factor list."""
    if not states:
        raise ValueError("no states to superpose")
    factors = states[0].factors
    for s in states[1:]:
        if s.factors != factors:
            raise ValueError("superposed states must share the factor list")
    labels = np.vstack([s.labels for s in states])
    amps = np.concatenate([c * s.amplitudes for c, s in zip(coeffs, states)])
    uniq, inv = _unique_rows(labels)
    out = np.zeros(len(uniq), dtype=np.result_type(amps, float))
    np.add.at(out, inv, amps)
    meta = {}
    for s in states:
        meta.update(s.meta)
    return LabeledState(factors, uniq, out, meta)


def _fermion_columns(factors) -> np.ndarray:
    return np.array([f.fermionic for f in factors], dtype=bool)


def _reorder_sign(labels: np.ndarray, factors, order: Sequence[int]) -> np.ndarray:
    """Sign of bringing each label's occupied fermionic factors into ``order``.

    The sign is (-1) to the number of inversions among occupied fermionic
    factors, i.e. pairs that swap relative position.
    """
    ferm = _fermion_columns(factors)
    occ = (labels > 0) & ferm[None, :]
    pos = np.empty(len(order), dtype=int)
    pos[np.asarray(order)] = np.arange(len(order))
    inversions = np.zeros(len(labels), dtype=np.int64)
    cols = np.flatnonzero(ferm)
    for x in range(len(cols)):
        for y in range(x + 1, len(cols)):
            i, j = cols[x], cols[y]
            if pos[i] > pos[j]:
                inversions += occ[:, i] & occ[:, j]
    return np.where(inversions % 2 == 0, 1.0, -1.0)


def permute_factors(obj, order: Sequence[int]):
    """Reorder the factors of a state or density matrix, applying fermionic signs."""
    order = list(order)
    if sorted(order) != list(range(len(obj.factors))):
        raise ValueError("order must be a permutation of the factor indices")
    factors = tuple(obj.factors[i] for i in order)
    sign = _reorder_sign(obj.labels, obj.factors, order)
    labels = obj.labels[:, order]
    if isinstance(obj, LabeledState):
        return LabeledState(factors, labels, obj.amplitudes * sign, obj.meta)
    s = sp.diags(sign)
    return DensityMatrix(factors, labels, (s @ obj.matrix @ s).tocsr(), obj.meta)


def density_matrix(state: LabeledState) -> DensityMatrix:
    """|psi><psi| as a sparse matrix over the state's own labels."""
    v = sp.csr_matrix(state.amplitudes.reshape(-1, 1))
    return DensityMatrix(state.factors, state.labels, (v @ v.conj().T).tocsr(), state.meta)


def _trace_signs(labels: np.ndarray, factors, kept_mask: np.ndarray) -> np.ndarray:
    """Sign of moving the traced fermionic factors in front of the kept ones."""
    idx = np.arange(len(factors))
    order = list(idx[~kept_mask]) + list(idx[kept_mask])
    return _reorder_sign(labels, factors, order)


def _finish_reduced(factors, kept_mask, rows_lab, cols_lab, vals, meta):
    kept_factors = tuple(f for f, k in zip(factors, kept_mask) if k)
    both = np.vstack([rows_lab, cols_lab]) if len(rows_lab) else np.zeros((0, len(kept_factors)), np.int64)
    uniq, inv = _unique_rows(both)
    n = len(rows_lab)
    m = sp.coo_matrix((vals, (inv[:n], inv[n:])), shape=(len(uniq), len(uniq))).tocsr()
    m.sum_duplicates()
    return DensityMatrix(kept_factors, uniq, m, dict(meta))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every factor for which ``keep(factor)`` is false.

    Fermionic ordering is handled by first moving the traced factors to the
    front (a signed permutation) and then taking the ordinary trace.
    """
    kept = _select(rho.factors, keep)
    coo = rho.matrix.tocoo()
    sign = _trace_signs(rho.labels, rho.factors, kept)
    tr_key = _encode(rho.labels[:, ~kept])
    same = tr_key[coo.row] == tr_key[coo.col]
    r, c = coo.row[same], coo.col[same]
    vals = coo.data[same] * sign[r] * sign[c]
    if not kept.any():
        m = sp.csr_matrix(np.array([[vals.sum()]]))
        return DensityMatrix((), np.zeros((1, 0), np.int64), m, dict(rho.meta))
    return _finish_reduced(rho.factors, kept, rho.labels[r][:, kept], rho.labels[c][:, kept],
                           vals, rho.meta)


def reduce_pure(state: LabeledState, keep) -> DensityMatrix:
    """Reduced density matrix of a pure state without forming |psi><psi|.

    Entries sharing the same traced occupations are grouped; each group
    contributes the outer product of its (sign-corrected) amplitudes.
    """
    kept = _select(state.factors, keep)
    amps = state.amplitudes * _trace_signs(state.labels, state.factors, kept)
    key = _encode(state.labels[:, ~kept])
    order = np.argsort(key, kind="stable")
    key_s = key[order]
    starts = np.flatnonzero(np.r_[True, key_s[1:] != key_s[:-1]])
    counts = np.diff(np.r_[starts, len(key_s)])
    rows, cols = [], []
    for i_off in range(counts.max() if len(counts) else 0):
        for j_off in range(counts.max()):
            g = counts > max(i_off, j_off)
            rows.append(order[starts[g] + i_off])
            cols.append(order[starts[g] + j_off])
    rows = np.concatenate(rows) if rows else np.zeros(0, int)
    cols = np.concatenate(cols) if cols else np.zeros(0, int)
    vals = amps[rows] * np.conj(amps[cols])
    if not kept.any():
        m = sp.csr_matrix(np.array([[vals.sum()]]))
        return DensityMatrix((), np.zeros((1, 0), np.int64), m, dict(state.meta))
    return _finish_reduced(state.factors, kept, state.labels[rows][:, kept],
                           state.labels[cols][:, kept], vals, state.meta)


def partial_transpose(rho: DensityMatrix, subsystem) -> DensityMatrix:
    """Transpose the indices of the selected factors only.

    The result may have support on labels that index no row of ``rho``;
    the basis is extended accordingly (original labels first).
    """
    sel = _select(rho.factors, subsystem)
    coo = rho.matrix.tocoo()
    a, b = rho.labels[coo.row], rho.labels[coo.col]
    new_r, new_c = a.copy(), b.copy()
    new_r[:, sel], new_c[:, sel] = b[:, sel], a[:, sel]
    cand = np.vstack([rho.labels, new_r, new_c])
    key = _encode(cand)
    _, first, inv = np.unique(key, return_index=True, return_inverse=True)
    inv = inv.ravel()
    # original labels keep their positions; new ones follow in order of appearance
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    basis = cand[np.sort(first)]
    pos = rank[inv]
    n, off = len(coo.data), len(rho.labels)
    ri, ci = pos[off:off + n], pos[off + n:]
    m = sp.coo_matrix((coo.data, (ri, ci)), shape=(len(basis), len(basis))).tocsr()
    return DensityMatrix(rho.factors, basis, m, dict(rho.meta))


@dataclass
class Block:
    """One connected block of a matrix: its row indices, labels and dense entries."""

    indices: np.ndarray
    labels: np.ndarray
    matrix: np.ndarray


def _components(m: sp.csr_matrix, threshold: float):
    pattern = abs(m) > threshold
    ncomp, comp = connected_components(pattern, directed=False)
    return ncomp, comp


def block_decompose(rho: DensityMatrix, threshold: float = BLOCK_THRESHOLD) -> list[Block]:
    """Split a matrix into the connected components of its nonzero pattern."""
    ncomp, comp = _components(rho.matrix, threshold)
    order = np.argsort(comp, kind="stable")
    bounds = np.searchsorted(comp[order], np.arange(ncomp + 1))
    blocks = []
    for c in range(ncomp):
        ii = order[bounds[c]:bounds[c + 1]]
        sub = rho.matrix[ii][:, ii].toarray()
        blocks.append(Block(ii, rho.labels[ii], sub))
    return blocks


def block_spectra(m, threshold: float = BLOCK_THRESHOLD) -> list[tuple[np.ndarray, np.ndarray]]:
    """Eigenvalues of every connected block of a Hermitian sparse matrix.

    Returns ``(indices, eigenvalues)`` per block.  Blocks of equal size are
    diagonalised together as one stacked array.
    """
    m = sp.csr_matrix(m)
    n = m.shape[0]
    if n == 0:
        return []
    ncomp, comp = _components(m, threshold)
    order = np.argsort(comp, kind="stable")
    bounds = np.searchsorted(comp[order], np.arange(ncomp + 1))
    sizes = np.diff(bounds)
    local = np.empty(n, dtype=np.int64)
    local[order] = np.arange(n) - np.repeat(bounds[:-1], sizes)

    coo = m.tocoo()
    # entries below the threshold inside a block are kept; only cross-block ones are dropped
    keep = comp[coo.row] == comp[coo.col]
    r, c, v = coo.row[keep], coo.col[keep], coo.data[keep]

    out: list = [None] * ncomp
    for size in np.unique(sizes):
        comps = np.flatnonzero(sizes == size)
        slot = np.full(ncomp, -1, dtype=np.int64)
        slot[comps] = np.arange(len(comps))
        stack = np.zeros((len(comps), size, size), dtype=np.result_type(v, float))
        sel = slot[comp[r]] >= 0
        np.add.at(stack, (slot[comp[r[sel]]], local[r[sel]], local[c[sel]]), v[sel])
        if size == 1:
            evals = np.real(stack[:, 0, 0])[:, None]
        else:
            evals = np.linalg.eigvalsh(stack)
        for k, cc in enumerate(comps):
            out[cc] = (order[bounds[cc]:bounds[cc + 1]], evals[k])
    return out


def negativity_from_matrix(rho_pt, eig_floor: float = EIG_FLOOR,
                           threshold: float = BLOCK_THRESHOLD,
                           hermitian_tol: float = HERMITIAN_TOL):
    """Negativity of a partially transposed matrix.

    Returns ``(N, negative_eigenvalues)`` with N the sum of the magnitudes
    of the eigenvalues below ``-eig_floor``.
    """
    m = rho_pt.matrix if isinstance(rho_pt, DensityMatrix) else sp.csr_matrix(rho_pt)
    d = (m - m.conj().T).tocoo()
    if d.nnz and np.abs(d.data).max() > hermitian_tol:
        raise ValueError("partially transposed matrix is not Hermitian")
    neg = [ev[ev < -eig_floor] for _, ev in block_spectra(m, threshold)]
    neg = np.sort(np.concatenate(neg)) if neg else np.zeros(0)
    return float(-neg.sum()), neg.tolist()


def write_csv(rho: DensityMatrix, dest=None, dense: bool = False, tol: float = 0.0):
    """Dump matrix entries as CSV rows ``row_label, col_label, re, im``.

    Only nonzero entries are written unless ``dense`` is set.  ``dest`` may
    be a path or a text stream; with no destination the CSV text is returned.
    """
    names = [format_label(rho.factors, row) for row in rho.labels]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row_label", "col_label", "re", "im"])
    if dense:
        a = rho.dense()
        entries: Iterable = ((i, j, a[i, j]) for i in range(a.shape[0]) for j in range(a.shape[1]))
    else:
        coo = rho.matrix.tocoo()
        entries = sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
    for i, j, v in entries:
        if dense or abs(v) > tol:
            w.writerow([names[i], names[j], repr(float(np.real(v))), repr(float(np.imag(v)))])
    text = buf.getvalue()
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    return None
