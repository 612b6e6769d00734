"""Hermitian matrix primitives, generalized Gell-Mann generators, Bloch vectors
and random state sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BadTrace, DimensionMismatch, NonPositive, NotHermitian, SicLabError

TOL_HERM = 1e-12
TOL_TRACE = 1e-12
TOL_PSD = 1e-10

INF = math.inf
"""Order sentinel for q = infinity (Schatten norms) and alpha = infinity (entropies)."""


def _matrix(x) -> np.ndarray:
    m = np.asarray(x, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=np.complex128, copy=True)
    m.flags.writeable = False
    return m


def hermitian_defect(m: np.ndarray) -> float:
    """Frobenius norm of m - m^dagger relative to that of m."""
    scale = max(np.linalg.norm(m), 1.0)
    return float(np.linalg.norm(m - m.conj().T) / scale)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    matrix: np.ndarray

    def __init__(self, matrix, tol: float = TOL_HERM):
        m = _matrix(matrix)
        if hermitian_defect(m) > tol:
            raise NotHermitian(f"matrix is not Hermitian (defect {hermitian_defect(m):.3g})")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class DensityMatrix(HermitianOperator):
    """Unit-trace positive semidefinite operator."""

    def __init__(self, matrix, tol_psd: float = TOL_PSD, tol_trace: float = TOL_TRACE):
        super().__init__(matrix)
        tr = np.trace(self.matrix).real
        if abs(tr - 1.0) > tol_trace:
            raise BadTrace(f"trace is {tr!r}, expected 1")
        lo = self.eigvalsh()[0]
        if lo < -tol_psd:
            raise NonPositive(f"minimum eigenvalue {lo:.3g} below -{tol_psd:g}")

    @property
    def op(self) -> HermitianOperator:
        return HermitianOperator(self.matrix)

    def eigenvalues(self) -> np.ndarray:
        """Spectrum with round-off negatives clamped to zero."""
        return np.clip(self.eigvalsh(), 0.0, None)


@dataclass(frozen=True, eq=False)
class BlochVector:
    dim: int
    components: np.ndarray

    def __init__(self, dim: int, components):
        r = np.array(components, dtype=np.float64, copy=True).reshape(-1)
        if r.size != dim * dim - 1:
            raise DimensionMismatch(f"Bloch vector for d={dim} needs {dim * dim - 1} components, got {r.size}")
        r.flags.writeable = False
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "components", r)

    def norm_sq(self) -> float:
        return float(self.components @ self.components)


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    dim: int
    generators: np.ndarray  # (d*d - 1, d, d)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, n):
        return self.generators[n]


def hs_inner(x, y) -> complex:
    """Hilbert-Schmidt inner product tr(x^dagger y)."""
    a, b = _matrix(x), _matrix(y)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.vdot(a, b))


def singular_values(x) -> np.ndarray:
    m = _matrix(x)
    if hermitian_defect(m) <= TOL_HERM:
        return np.sort(np.abs(np.linalg.eigvalsh(m)))[::-1]
    return np.linalg.svd(m, compute_uv=False)


def schatten_norm(x, q: float) -> float:
    """Schatten q-norm; ``q=INF`` gives the spectral norm."""
    if q == INF:
        return float(singular_values(x)[0])
    if not q >= 1:
        raise ValueError(f"Schatten order must satisfy q >= 1, got {q!r}")
    s = singular_values(x)
    if q == 1:
        return float(s.sum())
    if q == 2:
        return float(np.sqrt(s @ s))
    top = s[0]
    if top == 0.0:
        return 0.0
    # scale by the largest singular value so s**q cannot overflow
    return float(top * np.sum((s / top) ** q) ** (1.0 / q))


def psd_sqrt(x) -> np.ndarray:
    """Square root of a PSD matrix; eigenvalues are clamped at zero."""
    w, v = np.linalg.eigh(_matrix(x))
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ v.conj().T


@lru_cache(maxsize=None)
def _gell_mann_stack(d: int) -> np.ndarray:
    gens = []
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = g[k, j] = 1.0
        gens.append(g)
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = -1j
        g[k, j] = 1j
        gens.append(g)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        gens.append(np.diag(diag * math.sqrt(2.0 / (l * (l + 1)))).astype(np.complex128))
    stack = np.array(gens)
    stack.flags.writeable = False
    return stack


def gell_mann_basis(d: int) -> GeneratorBasis:
    """The d*d - 1 generalized Gell-Mann matrices with tr(l_m l_n) = 2 delta_mn.

    Order: symmetric (j<k), antisymmetric (j<k), then diagonal.  For d=2 this
    is (sigma_x, sigma_y, sigma_z).
    """
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    return GeneratorBasis(int(d), _gell_mann_stack(int(d)))


def bloch_from_density(rho) -> BlochVector:
    m = np.asarray(rho, dtype=np.complex128)
    d = m.shape[0]
    gens = _gell_mann_stack(d)
    # tr(rho l_n) = sum_ab rho[a,b] l_n[b,a]
    r = 0.5 * d * np.einsum("ab,nba->n", m, gens).real
    return BlochVector(d, r)


def density_from_bloch(r: BlochVector, tol_psd: float = TOL_PSD) -> DensityMatrix:
    d = r.dim
    m = (np.eye(d) + np.tensordot(r.components, _gell_mann_stack(d), axes=1)) / d
    lo = np.linalg.eigvalsh(m)[0]
    if lo < -tol_psd:
        raise NonPositive(f"Bloch vector lies outside the state space (min eigenvalue {lo:.3g})")
    return DensityMatrix(m, tol_psd=tol_psd)


def purity(rho) -> float:
    """tr(rho^2)."""
    m = np.asarray(rho, dtype=np.complex128)
    return float(np.vdot(m, m).real)


def as_rng(seed) -> np.random.Generator:
    """Accept an int seed, ``None`` or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure_state(d: int, seed=None) -> DensityMatrix:
    """Haar-random projector |psi><psi|."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d!r}")
    psi = _complex_gaussian(as_rng(seed), d)
    psi /= np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()))


def random_density(d: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Sample from the Hilbert-Schmidt-induced ensemble: G G^dagger / tr(G G^dagger)."""
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise SicLabError(f"rank must lie in [1, {d}], got {rank!r}")
    g = _complex_gaussian(as_rng(seed), (d, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real)


def maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix(np.eye(d) / d)
