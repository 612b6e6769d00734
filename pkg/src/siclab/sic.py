"""General SIC-POVMs: construction, certification, dual basis, measurement and
linear-inversion reconstruction."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    BadTrace,
    DimensionMismatch,
    Incomplete,
    NonPositive,
    NotHermitian,
    NotSymmetric,
    OutOfRange,
    SicLabError,
    SingularFamily,
    UnsupportedDimension,
    WrongCount,
)
from .linalg import TOL_HERM, TOL_PSD, HermitianOperator, hermitian_defect

TOL_COMPLETE = 1e-10
TOL_SIC = 1e-9
TOL_PROB = 1e-10


def _stack(elements) -> np.ndarray:
    arr = np.array([np.asarray(e, dtype=np.complex128) for e in elements])
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionMismatch(f"elements must be square matrices of one size, got shape {arr.shape}")
    return arr


def _readonly(arr):
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive operators summing to the identity."""

    elements: np.ndarray  # (n, d, d)

    def __init__(self, elements, tol_psd: float = TOL_PSD, tol_complete: float = TOL_COMPLETE):
        arr = _stack(elements)
        for j, e in enumerate(arr):
            if hermitian_defect(e) > TOL_HERM:
                raise NotHermitian(f"element {j} is not Hermitian")
            lo = np.linalg.eigvalsh(e)[0]
            if lo < -tol_psd:
                raise NonPositive(f"element {j} has eigenvalue {lo:.3g}")
        resid = completeness_residual(arr)
        if resid > tol_complete:
            raise Incomplete(f"elements sum to identity only up to {resid:.3g}")
        object.__setattr__(self, "elements", _readonly(arr))

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True, eq=False)
class GeneralSicPovm:
    povm: Povm
    a: float
    b: float

    @property
    def dim(self) -> int:
        return self.povm.dim

    @property
    def elements(self) -> np.ndarray:
        return self.povm.elements

    def __len__(self):
        return len(self.povm)

    def __repr__(self):
        return f"GeneralSicPovm(dim={self.dim}, a={self.a!r}, b={self.b!r})"


@dataclass(frozen=True, eq=False)
class DualBasis:
    dim: int
    elements: np.ndarray  # (d*d, d, d), Hermitian, not all positive


@dataclass(frozen=True, eq=False)
class ProbabilityDistribution:
    probs: np.ndarray

    def __init__(self, probs, tol: float = TOL_PROB):
        p = np.array(probs, dtype=np.float64, copy=True).reshape(-1)
        if p.size == 0:
            raise SicLabError("empty distribution")
        if p.min() < -1e-12:
            raise SicLabError(f"negative probability {p.min():.3g}")
        total = p.sum()
        if abs(total - 1.0) > tol:
            raise SicLabError(f"probabilities sum to {total!r}")
        p = np.clip(p, 0.0, 1.0)
        p /= p.sum()
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return self.probs.size

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)


def completeness_residual(elements) -> float:
    arr = np.asarray(elements)
    d = arr.shape[1]
    return float(np.linalg.norm(arr.sum(axis=0) - np.eye(d)))


def gram_matrix(elements) -> np.ndarray:
    """Real Gram matrix G[j,k] = <E_j, E_k>_hs."""
    arr = np.asarray(elements, dtype=np.complex128)
    flat = arr.reshape(len(arr), -1)
    return (flat.conj() @ flat.T).real


def sic_parameter_b(a: float, d: int) -> float:
    return (1.0 - a * d) / (d * (d * d - 1))


def povm_diagnostics(elements) -> dict:
    """Summary numbers for a candidate POVM; never raises on bad content."""
    arr = _stack(elements)
    n, d = len(arr), arr.shape[1]
    g = gram_matrix(arr)
    diag = np.diag(g)
    off = g[~np.eye(n, dtype=bool)] if n > 1 else np.array([np.nan])
    a = float(diag.mean())
    b = float(off.mean())
    return {
        "dim": d,
        "count": n,
        "a": a,
        "b": b,
        "b_expected": sic_parameter_b(a, d),
        "gram_spread": float(max(np.ptp(diag), np.ptp(off))),
        "completeness_residual": completeness_residual(arr),
        "min_eigenvalue": float(min(np.linalg.eigvalsh(e)[0] for e in arr)),
        "max_trace_error": float(np.max(np.abs(np.trace(arr, axis1=1, axis2=2) - 1.0 / d))),
    }


def validate_general_sic(povm, tol_sic: float = TOL_SIC) -> GeneralSicPovm:
    """Certify a POVM as a general SIC and measure its parameters (a, b)."""
    if not isinstance(povm, Povm):
        povm = Povm(povm)
    arr = povm.elements
    n, d = len(arr), povm.dim
    if n != d * d:
        raise WrongCount(f"a general SIC in d={d} has {d * d} elements, got {n}")
    traces = np.trace(arr, axis1=1, axis2=2)
    bad = np.max(np.abs(traces - 1.0 / d))
    if bad > tol_sic:
        raise BadTrace(f"element traces deviate from 1/d by {bad:.3g}")
    g = gram_matrix(arr)
    diag = np.diag(g)
    off = g[~np.eye(n, dtype=bool)]
    spread = max(np.ptp(diag), np.ptp(off))
    if spread > tol_sic:
        raise NotSymmetric(f"Gram matrix spread {spread:.3g} exceeds {tol_sic:g}")
    a, b = float(diag.mean()), float(off.mean())
    if abs(b - sic_parameter_b(a, d)) > tol_sic:
        raise NotSymmetric(f"b={b!r} inconsistent with a={a!r}")
    if not (a - d**-3 > tol_sic and a <= d**-2 + tol_sic):
        raise OutOfRange(f"a={a!r} outside ({d**-3!r}, {d**-2!r}]")
    return GeneralSicPovm(povm, a, b)


# -- constructions ---------------------------------------------------------

def shift_clock(d: int) -> tuple[np.ndarray, np.ndarray]:
    """X|k> = |k+1 mod d>, Z|k> = omega^k |k>."""
    x = np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return x, z


def wh_orbit(fiducial) -> list[np.ndarray]:
    """Weyl-Heisenberg orbit {X^p Z^q |phi>}, ordered with q outer and p inner."""
    phi = np.asarray(fiducial, dtype=np.complex128).reshape(-1)
    if abs(np.linalg.norm(phi) - 1.0) > 1e-10:
        raise SicLabError(f"fiducial must be a unit vector (norm {np.linalg.norm(phi)!r})")
    d = phi.size
    x, z = shift_clock(d)
    out = []
    zq = phi
    for _ in range(d):
        v = zq
        for _ in range(d):
            out.append(v)
            v = x @ v
        zq = z @ zq
    return out


def sic_from_vectors(vectors) -> GeneralSicPovm:
    """Rank-one SIC M_j = |phi_j><phi_j| / d from d*d equiangular unit vectors."""
    vecs = np.asarray(vectors, dtype=np.complex128)
    d = vecs.shape[1]
    elems = np.einsum("ja,jb->jab", vecs, vecs.conj()) / d
    return validate_general_sic(Povm(elems))


_TETRA = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3.0)


def tetrahedron_vectors() -> np.ndarray:
    """Qubit states whose Bloch vectors form a regular tetrahedron."""
    out = []
    for x, y, zc in _TETRA:
        theta = math.acos(zc)
        phi = math.atan2(y, x)
        out.append([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
    return np.array(out, dtype=np.complex128)


HESSE_FIDUCIAL = np.array([0.0, 1.0, -1.0]) / math.sqrt(2.0)


def rank_one_sic(d: int) -> GeneralSicPovm:
    """Built-in rank-one SICs for d=2 (tetrahedron) and d=3 (Hesse orbit)."""
    if d == 2:
        return sic_from_vectors(tetrahedron_vectors())
    if d == 3:
        return sic_from_vectors(wh_orbit(HESSE_FIDUCIAL))
    raise UnsupportedDimension(f"no built-in fiducial for d={d}; supply one via wh_orbit")


def depolarize_sic(sic: GeneralSicPovm, lam: float) -> GeneralSicPovm:
    """M_j(lam) = (1 - lam) I/d^2 + lam M_j; a(lam) = (1 - lam^2)/d^3 + lam^2/d^2."""
    if not 0.0 < lam <= 1.0:
        raise OutOfRange(f"lambda must lie in (0, 1], got {lam!r}")
    d = sic.dim
    if abs(sic.a - d**-2) > TOL_SIC:
        raise SicLabError("depolarize_sic expects a rank-one SIC (a = d^-2)")
    if lam == 1.0:
        return sic
    elems = (1.0 - lam) * np.eye(d) / d**2 + lam * sic.elements
    return validate_general_sic(Povm(elems))


def expected_depolarized_a(d: int, lam: float) -> float:
    return (1.0 - lam * lam) / d**3 + lam * lam / d**2


def unitary_rotate(sic: GeneralSicPovm, u) -> GeneralSicPovm:
    """U M_j U^dagger; preserves a."""
    u = np.asarray(u, dtype=np.complex128)
    elems = np.einsum("ab,jbc,dc->jad", u, sic.elements, u.conj())
    return validate_general_sic(Povm(elems))


# -- dual basis, measurement, reconstruction -------------------------------

def dual_basis(sic: GeneralSicPovm, tol: float = 1e-12) -> DualBasis:
    d, a = sic.dim, sic.a
    denom = a * d**3 - 1.0
    if denom <= tol:
        raise SingularFamily(f"a*d^3 - 1 = {denom!r}; family cannot be dualized")
    elems = d / denom * ((d * d - 1) * sic.elements - (1.0 - a * d) * np.eye(d))
    return DualBasis(d, _readonly(elems))


def duality_matrix(sic: GeneralSicPovm, dual: DualBasis) -> np.ndarray:
    """G[j,k] = <M_j, dual_k>_hs; should be the identity."""
    m = sic.elements.reshape(len(sic), -1)
    w = dual.elements.reshape(len(dual.elements), -1)
    return m.conj() @ w.T


def _check_dim(sic, rho):
    r = np.asarray(rho, dtype=np.complex128)
    if r.shape[-1] != sic.dim:
        raise DimensionMismatch(f"state dimension {r.shape[-1]} vs POVM dimension {sic.dim}")
    return r


def born_probabilities(sic: GeneralSicPovm, rhos) -> np.ndarray:
    """Raw p[s, j] = tr(M_j rho_s) for a stack of states, no clamping."""
    r = _check_dim(sic, rhos)
    if r.ndim == 2:
        r = r[None]
    return _kernels.born_probs(sic.elements, r)


def probabilities(sic: GeneralSicPovm, rho) -> ProbabilityDistribution:
    p = born_probabilities(sic, rho)[0]
    return ProbabilityDistribution(p)


def reconstruct(sic: GeneralSicPovm, p, dual: DualBasis | None = None) -> HermitianOperator:
    """Linear inversion rho = sum_j p_j dual_j."""
    probs = np.asarray(p, dtype=np.float64).reshape(-1)
    if probs.size != len(sic):
        raise DimensionMismatch(f"need {len(sic)} probabilities, got {probs.size}")
    dual = dual_basis(sic) if dual is None else dual
    m = np.tensordot(probs, dual.elements, axes=1)
    return HermitianOperator(0.5 * (m + m.conj().T))


def measurement_condition_number(sic: GeneralSicPovm) -> float:
    """Condition number of the linear map rho -> p restricted to Hermitian matrices."""
    flat = sic.elements.reshape(len(sic), -1)
    return float(np.linalg.cond(flat))
