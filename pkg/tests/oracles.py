"""Independent dense reference implementations used by the tests.

Nothing here calls into the package's matrix code: states are expanded
into full dense vectors, fermions are represented through the
Jordan-Wigner construction, and partial traces and transposes are done by
reshaping.
"""

import itertools
import math

import numpy as np


def dense_vector(state, dims=None):
    """Full tensor-product vector of a LabeledState (ordinary, unsigned embedding)."""
    if dims is None:
        dims = [int(state.labels[:, c].max()) + 1 for c in range(len(state.factors))]
    vec = np.zeros(dims, dtype=complex)
    for row, amp in zip(state.labels, state.amplitudes):
        vec[tuple(row)] += amp
    return vec, dims


def dense_rho_from_labels(rho, dims=None):
    """Embed a DensityMatrix into the full grid with the given per-factor dimensions."""
    if dims is None:
        dims = [int(rho.labels[:, c].max()) + 1 for c in range(len(rho.factors))]
    size = int(np.prod(dims))
    flat = np.ravel_multi_index(rho.labels.T, dims) if len(rho.labels) else np.zeros(0, int)
    out = np.zeros((size, size), dtype=complex)
    coo = rho.matrix.tocoo()
    np.add.at(out, (flat[coo.row], flat[coo.col]), coo.data)
    return out, dims


def ptrace_dense(vec_or_rho, dims, keep):
    """Ordinary partial trace by reshaping.  ``keep`` is a list of factor indices."""
    k = len(dims)
    if vec_or_rho.ndim == k:
        v = vec_or_rho.reshape(dims)
        traced = [i for i in range(k) if i not in keep]
        v = np.transpose(v, list(keep) + traced)
        dk = int(np.prod([dims[i] for i in keep]))
        m = v.reshape(dk, -1)
        return m @ m.conj().T
    rho = vec_or_rho.reshape(dims + dims)
    traced = [i for i in range(k) if i not in keep]
    rho = np.transpose(rho, list(keep) + traced + [k + i for i in keep] + [k + i for i in traced])
    dk = int(np.prod([dims[i] for i in keep]))
    dt = int(np.prod([dims[i] for i in traced]))
    rho = rho.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", rho)


def ptranspose_dense(rho, dims, sub):
    """Transpose the indices of the factors listed in ``sub``."""
    k = len(dims)
    t = rho.reshape(dims + dims)
    axes = list(range(2 * k))
    for i in sub:
        axes[i], axes[k + i] = axes[k + i], axes[i]
    return np.transpose(t, axes).reshape(rho.shape)


def dense_negativity(rho):
    ev = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    return float(-ev[ev < 0].sum())


def entropy_dense(rho):
    ev = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    ev = ev[ev > 1e-14]
    return float(-(ev * np.log(ev)).sum())


# ------------------------------------------------------------ Jordan-Wigner

def jw_annihilators(k):
    """Annihilation operators of k fermionic modes on the 2^k dimensional space."""
    a = np.array([[0, 1], [0, 0]], dtype=complex)
    z = np.diag([1.0, -1.0]).astype(complex)
    eye = np.eye(2, dtype=complex)
    ops = []
    for j in range(k):
        m = np.array([[1.0]], dtype=complex)
        for i in range(k):
            m = np.kron(m, z if i < j else (a if i == j else eye))
        ops.append(m)
    return ops


def jw_ket(occ, cs):
    """(c_1^dag)^n_1 ... (c_k^dag)^n_k |vac>, creation operators applied in factor order."""
    k = len(cs)
    vac = np.zeros(2 ** k, dtype=complex)
    vac[0] = 1.0
    v = vac
    for j in reversed(range(k)):
        if occ[j]:
            v = cs[j].conj().T @ v
    return v


def jw_state(state):
    """Fock-space vector of an all-fermionic LabeledState."""
    k = len(state.factors)
    cs = jw_annihilators(k)
    psi = np.zeros(2 ** k, dtype=complex)
    for row, amp in zip(state.labels, state.amplitudes):
        psi += amp * jw_ket(row, cs)
    return psi, cs


def jw_reduced(state, keep):
    """Reduced density matrix on the kept fermionic factors from expectation values.

    rho[n, m] = <psi| C^dag_m P_vac C_n |psi>  with C^dag_n the ordered
    product of creation operators of the kept modes occupied in n.  This is
    the physical reduced state: it reproduces every even observable.
    Rows and columns are indexed by the kept occupations in binary order.
    """
    psi, cs = jw_state(state)
    dim = 2 ** len(cs)
    p_vac = np.eye(dim, dtype=complex)
    for j in keep:
        p_vac = p_vac @ (np.eye(dim) - cs[j].conj().T @ cs[j])

    def creator(occ):
        m = np.eye(dim, dtype=complex)
        for j, n in zip(keep, occ):
            if n:
                m = m @ cs[j].conj().T
        return m

    basis = list(itertools.product((0, 1), repeat=len(keep)))
    ops = {b: creator(b) for b in basis}
    out = np.zeros((len(basis), len(basis)), dtype=complex)
    for i, n in enumerate(basis):
        for j, m in enumerate(basis):
            op = ops[m] @ p_vac @ ops[n].conj().T
            out[i, j] = psi.conj() @ op @ psi
    return out


def close(a, b, tol):
    return abs(a - b) <= tol


def neg2x2_eig(a, b, c):
    """Negativity of [[a, c], [c, b]] via numpy's eigensolver."""
    ev = np.linalg.eigvalsh(np.array([[a, c], [c, b]], dtype=float))
    return float(-ev[ev < 0].sum())


PI4 = math.pi / 4
