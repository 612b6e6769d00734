"""Batched inner loops shared by the measurement and entropy layers.

Each kernel exists twice: a numba ``@njit`` version and a plain numpy version.
The numba path is used when numba imports and ``SICLAB_NUMBA`` is not set to
``0``; both paths are importable directly so they can be compared.

The row reductions (``power_sums``, ``shannon_rows``) dispatch to numpy on
either backend: numpy's vectorized pow/log beats the scalar jit loop there
(see benchmarks/bench_kernels.py).
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

HAS_NUMBA = numba is not None
USE_NUMBA = HAS_NUMBA and os.environ.get("SICLAB_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")
BACKEND = "numba" if USE_NUMBA else "numpy"


def _njit(func=None, **opts):
    if func is None:
        return lambda f: _njit(f, **opts)
    if HAS_NUMBA:
        return numba.njit(cache=True, **opts)(func)
    return func


# -- numpy -----------------------------------------------------------------

def born_probs_numpy(elements, rhos):
    """p[s, j] = tr(E_j rho_s) for stacks ``elements`` (n,d,d) and ``rhos`` (m,d,d)."""
    return np.einsum("jab,sba->sj", elements, rhos).real


def power_sums_numpy(probs, alpha):
    """Row-wise sum of p**alpha, with zero entries contributing nothing."""
    p = np.asarray(probs, dtype=np.float64)
    safe = np.where(p > 0.0, p, 1.0)
    return np.where(p > 0.0, safe ** alpha, 0.0).sum(axis=-1)


def shannon_rows_numpy(probs):
    p = np.asarray(probs, dtype=np.float64)
    safe = np.where(p > 0.0, p, 1.0)
    return -np.where(p > 0.0, p * np.log(safe), 0.0).sum(axis=-1)


def pair_cells_numpy(m_elems, n_elems, rho):
    """T[i, j] = tr(M_i N_j rho)."""
    rm = np.einsum("ab,ibc->iac", rho, m_elems)
    return np.einsum("iab,jba->ij", rm, n_elems)


# -- numba -----------------------------------------------------------------

@_njit
def _born_probs_jit(elements, rhos):
    m = rhos.shape[0]
    n = elements.shape[0]
    d = elements.shape[1]
    out = np.empty((m, n))
    for s in range(m):
        for j in range(n):
            acc = 0.0
            for a in range(d):
                for b in range(d):
                    z = elements[j, a, b] * rhos[s, b, a]
                    acc += z.real
            out[s, j] = acc
    return out


@_njit
def _power_sums_jit(probs, alpha):
    m, n = probs.shape
    out = np.zeros(m)
    for s in range(m):
        acc = 0.0
        for j in range(n):
            x = probs[s, j]
            if x > 0.0:
                acc += x**alpha
        out[s] = acc
    return out


@_njit
def _shannon_rows_jit(probs):
    m, n = probs.shape
    out = np.zeros(m)
    for s in range(m):
        acc = 0.0
        for j in range(n):
            x = probs[s, j]
            if x > 0.0:
                acc -= x * np.log(x)
        out[s] = acc
    return out


@_njit
def _pair_cells_jit(m_elems, n_elems, rho):
    nm = m_elems.shape[0]
    nn = n_elems.shape[0]
    d = rho.shape[0]
    rm = np.zeros((nm, d, d), dtype=np.complex128)
    for i in range(nm):
        for a in range(d):
            for c in range(d):
                acc = 0j
                for b in range(d):
                    acc += rho[a, b] * m_elems[i, b, c]
                rm[i, a, c] = acc
    out = np.empty((nm, nn), dtype=np.complex128)
    for i in range(nm):
        for j in range(nn):
            acc = 0j
            for a in range(d):
                for b in range(d):
                    acc += rm[i, a, b] * n_elems[j, b, a]
            out[i, j] = acc
    return out


def _c128(x):
    return np.ascontiguousarray(x, dtype=np.complex128)


def _f64_2d(x):
    return np.ascontiguousarray(np.atleast_2d(np.asarray(x, dtype=np.float64)))


def born_probs_numba(elements, rhos):
    return _born_probs_jit(_c128(elements), _c128(rhos))


def power_sums_numba(probs, alpha):
    p = np.asarray(probs, dtype=np.float64)
    out = _power_sums_jit(_f64_2d(p), float(alpha))
    return out[0] if p.ndim == 1 else out


def shannon_rows_numba(probs):
    p = np.asarray(probs, dtype=np.float64)
    out = _shannon_rows_jit(_f64_2d(p))
    return out[0] if p.ndim == 1 else out


def pair_cells_numba(m_elems, n_elems, rho):
    return _pair_cells_jit(_c128(m_elems), _c128(n_elems), _c128(rho))


power_sums = power_sums_numpy
shannon_rows = shannon_rows_numpy
if USE_NUMBA:
    born_probs = born_probs_numba
    pair_cells = pair_cells_numba
else:
    born_probs = born_probs_numpy
    pair_cells = pair_cells_numpy
