"""Closed-form index-of-coincidence and entropic bounds for general SIC-POVMs,
and suite runners that test them against entropies computed from sampled
states."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .entropy import alpha_log, binary_tsallis, conjugate_orders, renyi, tsallis
from .errors import DimensionMismatch, OutOfRange, SicLabError, UnsupportedOrder
from .linalg import INF, as_rng, maximally_mixed, psd_sqrt, purity, random_density, schatten_norm
from .sic import GeneralSicPovm, born_probabilities

DEFAULT_TOL_BOUND = 1e-10
SATURATION_TOL = 1e-9
ZERO_PROB = 1e-14
_PARAM_TOL = 1e-9


def tol_bound() -> float:
    """Violation tolerance; ``SICLAB_TOL`` overrides the default."""
    raw = os.environ.get("SICLAB_TOL")
    return float(raw) if raw else DEFAULT_TOL_BOUND


@dataclass(frozen=True)
class BoundReport:
    bound_name: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    context: dict = field(default_factory=dict)

    @classmethod
    def make(cls, bound_name, lhs, rhs, tol=None, **context):
        tol = tol_bound() if tol is None else tol
        lhs, rhs = float(lhs), float(rhs)
        slack = lhs - rhs
        return cls(bound_name, lhs, rhs, slack, bool(slack >= -tol), context)

    @property
    def saturated(self) -> bool:
        return abs(self.slack) < SATURATION_TOL


# -- single-measurement closed forms ---------------------------------------

def _check_params(a, d, pur=None):
    if int(d) != d or d < 2:
        raise OutOfRange(f"dimension must be an integer >= 2, got {d!r}")
    if not (a > d**-3 and a <= d**-2 + _PARAM_TOL):
        raise OutOfRange(f"a={a!r} outside ({d**-3!r}, {d**-2!r}]")
    if pur is not None and not (1.0 / d - _PARAM_TOL <= pur <= 1.0 + _PARAM_TOL):
        raise OutOfRange(f"purity {pur!r} outside [1/d, 1]")


def ic_exact(a: float, d: int, pur: float) -> float:
    """Index of coincidence of the outcome distribution of a general SIC with parameter a."""
    _check_params(a, d, pur)
    return ((a * d**3 - 1.0) * pur + d * (1.0 - a * d)) / (d * (d * d - 1))


def ic_bloch(a: float, d: int, bloch_norm_sq: float) -> float:
    """Same quantity as ``ic_exact`` written in terms of the Bloch vector norm."""
    _check_params(a, d)
    if not -_PARAM_TOL <= bloch_norm_sq <= d * (d - 1) / 2 + _PARAM_TOL:
        raise OutOfRange(f"|r|^2 = {bloch_norm_sq!r} outside [0, d(d-1)/2]")
    return 1.0 / d**2 + 2.0 * (a * d**3 - 1.0) / (d**3 * (d * d - 1)) * bloch_norm_sq


def _tsallis_order(alpha):
    if alpha == INF or not 0.0 < alpha <= 2.0:
        raise UnsupportedOrder(f"Tsallis bound holds for alpha in (0, 2], got {alpha!r}")


def tsallis_bound(a: float, d: int, pur: float, alpha: float) -> float:
    _tsallis_order(alpha)
    return alpha_log(1.0 / ic_exact(a, d, pur), alpha)


def tsallis_bound_bloch(a: float, d: int, bloch_norm_sq: float, alpha: float) -> float:
    _tsallis_order(alpha)
    return alpha_log(1.0 / ic_bloch(a, d, bloch_norm_sq), alpha)


def tsallis_inefficiency_bound(a: float, d: int, pur: float, alpha: float, eta: float) -> float:
    if not 0.0 <= eta <= 1.0:
        raise OutOfRange(f"eta must lie in [0, 1], got {eta!r}")
    return eta**alpha * tsallis_bound(a, d, pur, alpha) + binary_tsallis(eta, alpha)


def renyi_bound(a: float, d: int, pur: float, alpha: float) -> float:
    """Bound for alpha in [2, inf); infinite order goes to ``min_entropy_bound``."""
    if alpha == INF:
        raise UnsupportedOrder("use min_entropy_bound for the infinite order")
    if not alpha >= 2.0:
        raise UnsupportedOrder(f"alpha={alpha!r} < 2: use renyi_collision_bound")
    return alpha / (2.0 * (alpha - 1.0)) * math.log(1.0 / ic_exact(a, d, pur))


def renyi_collision_bound(a: float, d: int, pur: float) -> float:
    """-ln C; bounds every Renyi entropy of order alpha in (0, 2]."""
    return -math.log(ic_exact(a, d, pur))


def renyi_limit_bound(a: float, d: int, pur: float) -> float:
    """alpha -> inf limit of ``renyi_bound``: (1/2) ln(1/C)."""
    return 0.5 * math.log(1.0 / ic_exact(a, d, pur))


def _sqrt_clamped(x, what):
    if x < -1e-12:
        raise OutOfRange(f"{what} = {x!r} is negative")
    return math.sqrt(max(x, 0.0))


def max_prob_bound(a: float, d: int, pur: float) -> float:
    """Upper bound on the largest outcome probability."""
    _check_params(a, d, pur)
    root = _sqrt_clamped(a * d**3 - 1.0, "a d^3 - 1") * _sqrt_clamped(pur * d - 1.0, "purity d - 1")
    return (1.0 + root) / d**2


def min_entropy_bound(a: float, d: int, pur: float) -> float:
    _check_params(a, d, pur)
    root = _sqrt_clamped(a * d**3 - 1.0, "a d^3 - 1") * _sqrt_clamped(pur * d - 1.0, "purity d - 1")
    return 2.0 * math.log(d) - math.log1p(root)


def max_prob_lemma(x, b_sq: float | None = None) -> float:
    """(1/n)(1 + sqrt(n-1) sqrt(n b^2 - 1)) for n numbers summing to 1 with sum of squares b^2."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    n = x.size
    if abs(x.sum() - 1.0) > 1e-10:
        raise SicLabError(f"entries sum to {x.sum()!r}, expected 1")
    b_sq = float(x @ x) if b_sq is None else float(b_sq)
    return (1.0 + math.sqrt(n - 1) * _sqrt_clamped(n * b_sq - 1.0, "n b^2 - 1")) / n


# -- pairs of measurements -------------------------------------------------

def _same_dim(m, n):
    if m.dim != n.dim:
        raise DimensionMismatch(f"POVM dimensions differ: {m.dim} vs {n.dim}")


def pair_g(m: GeneralSicPovm, n: GeneralSicPovm, rho) -> float:
    """max_ij |tr(M_i N_j rho)| / sqrt(p_i(M) p_j(N)), skipping cells with p < 1e-14."""
    _same_dim(m, n)
    r = np.asarray(rho, dtype=np.complex128)
    pm = born_probabilities(m, r)[0]
    pn = born_probabilities(n, r)[0]
    cells = np.abs(_kernels.pair_cells(m.elements, n.elements, r))
    keep_m, keep_n = pm >= ZERO_PROB, pn >= ZERO_PROB
    sub = cells[np.ix_(keep_m, keep_n)]
    denom = np.sqrt(np.outer(pm[keep_m], pn[keep_n]))
    return float(np.max(sub / denom))


def _max_sqrt_norm(sic: GeneralSicPovm) -> float:
    return max(schatten_norm(psd_sqrt(e), INF) for e in sic.elements)


def pair_fbar(m: GeneralSicPovm, n: GeneralSicPovm) -> float:
    """max_ij ||M_i^(1/2)||_inf ||N_j^(1/2)||_inf (state independent)."""
    _same_dim(m, n)
    return _max_sqrt_norm(m) * _max_sqrt_norm(n)


def pair_fbar_sq(m: GeneralSicPovm, n: GeneralSicPovm) -> float:
    """max_ij ||M_i||_inf ||N_j||_inf, computed without square roots."""
    _same_dim(m, n)
    return max(schatten_norm(e, INF) for e in m.elements) * max(schatten_norm(e, INF) for e in n.elements)


PAIR_BOUND_NAMES = (
    "pair_tsallis_g",
    "pair_tsallis_fbar",
    "pair_tsallis_param",
    "pair_renyi_g",
    "pair_renyi_fbar",
    "pair_renyi_param",
)


def pair_rhs(g: float, fbar: float, a_m: float, a_n: float, mu: float) -> dict:
    """The six right-hand sides keyed by ``PAIR_BOUND_NAMES``."""
    return {
        "pair_tsallis_g": alpha_log(g**-2, mu),
        "pair_tsallis_fbar": alpha_log(fbar**-2, mu),
        "pair_tsallis_param": alpha_log((a_m * a_n) ** -0.5, mu),
        "pair_renyi_g": -2.0 * math.log(g),
        "pair_renyi_fbar": -2.0 * math.log(fbar),
        "pair_renyi_param": -0.5 * (math.log(a_m) + math.log(a_n)),
    }


def _conjugate(alpha, beta):
    if not (alpha > 0 and beta > 0) or abs(1.0 / alpha + 1.0 / beta - 2.0) > 1e-10:
        raise SicLabError(f"orders ({alpha!r}, {beta!r}) do not satisfy 1/alpha + 1/beta = 2")


def pair_bounds(m: GeneralSicPovm, n: GeneralSicPovm, rho, alpha: float, beta: float,
                fbar: float | None = None, tol=None, **context) -> list[BoundReport]:
    """Three Tsallis and three Renyi reports for H_alpha(M) + H_beta(N)."""
    _conjugate(alpha, beta)
    _same_dim(m, n)
    mu = max(alpha, beta)
    r = np.asarray(rho, dtype=np.complex128)
    pm = born_probabilities(m, r)[0]
    pn = born_probabilities(n, r)[0]
    g = pair_g(m, n, r)
    fbar = pair_fbar(m, n) if fbar is None else fbar
    rhs = pair_rhs(g, fbar, m.a, n.a, mu)
    lhs_t = tsallis(pm, alpha) + tsallis(pn, beta)
    lhs_r = renyi(pm, alpha) + renyi(pn, beta)
    ctx = dict(d=m.dim, a=m.a, a_n=n.a, purity=purity(r), alpha=alpha, beta=beta, g=g, fbar=fbar)
    ctx.update(context)
    return [
        BoundReport.make(name, lhs_t if "tsallis" in name else lhs_r, rhs[name], tol=tol, **ctx)
        for name in PAIR_BOUND_NAMES
    ]


def symmetrized_pair_bounds(m: GeneralSicPovm, n: GeneralSicPovm, rho, s: float,
                            fbar: float | None = None, tol=None, **context) -> list[BoundReport]:
    """Bounds on the sum of symmetrized entropies of M and N at parameter s."""
    alpha, beta = conjugate_orders(s)
    r = np.asarray(rho, dtype=np.complex128)
    pm = born_probabilities(m, r)[0]
    pn = born_probabilities(n, r)[0]
    g = pair_g(m, n, r)
    fbar = pair_fbar(m, n) if fbar is None else fbar
    rhs = pair_rhs(g, fbar, m.a, n.a, alpha)
    lhs_t = 0.5 * (tsallis(pm, alpha) + tsallis(pm, beta) + tsallis(pn, alpha) + tsallis(pn, beta))
    lhs_r = 0.5 * (renyi(pm, alpha) + renyi(pm, beta) + renyi(pn, alpha) + renyi(pn, beta))
    ctx = dict(d=m.dim, a=m.a, a_n=n.a, purity=purity(r), alpha=alpha, beta=beta, s=s, g=g, fbar=fbar)
    ctx.update(context)
    return [
        BoundReport.make("sym_" + name[len("pair_"):], lhs_t if "tsallis" in name else lhs_r,
                         rhs[name], tol=tol, **ctx)
        for name in PAIR_BOUND_NAMES
    ]


# -- suites ----------------------------------------------------------------

def sample_states(d: int, n_states: int, seed=None, include_mixed: bool = True) -> np.ndarray:
    """Stack of states: I/d first (optional), then Hilbert-Schmidt states with rank cycling 1..d."""
    rng = as_rng(seed)
    states = [maximally_mixed(d).matrix] if include_mixed else []
    k = 0
    while len(states) < n_states:
        states.append(random_density(d, rank=1 + k % d, seed=rng).matrix)
        k += 1
    return np.array(states[:n_states])


def _report_key(rep):
    c = rep.context
    return (c.get("povm", 0), c.get("state", 0), rep.bound_name,
            c.get("alpha", 0.0), c.get("eta", -1.0), c.get("s", 0.0))


def canonical_order(reports):
    return sorted(reports, key=_report_key)


def ic_residuals(sic: GeneralSicPovm, states) -> np.ndarray:
    """|sum_j p_j^2 - ic_exact| for each state in the stack."""
    p = born_probabilities(sic, states)
    c = np.sum(p * p, axis=1)
    exact = np.array([ic_exact(sic.a, sic.dim, purity(s)) for s in states])
    return np.abs(c - exact)


def check_bound_suite(sics, n_states: int = 100, orders=(0.5, 1.0, 2.0, 3.0, INF), etas=(),
                      seed=0, include_mixed: bool = True, labels=None, tol=None) -> list[BoundReport]:
    """Evaluate every applicable single-measurement bound over sampled states.

    ``sics`` is a GeneralSicPovm or a sequence of them; states are sampled once
    per dimension (in order of first appearance) from ``seed``.  ``labels``,
    if given, is attached to each report as ``context['lam']``.
    """
    if isinstance(sics, GeneralSicPovm):
        sics = [sics]
    rng = as_rng(seed)
    states_by_dim = {}
    reports = []
    for k, sic in enumerate(sics):
        d, a = sic.dim, sic.a
        if d not in states_by_dim:
            states_by_dim[d] = sample_states(d, n_states, rng, include_mixed)
        states = states_by_dim[d]
        probs = np.clip(born_probabilities(sic, states), 0.0, None)
        probs /= probs.sum(axis=1, keepdims=True)
        extra = {"povm": k}
        if labels is not None:
            extra["lam"] = labels[k]
        purs = np.clip([purity(rho) for rho in states], 1.0 / d, 1.0)
        for alpha in orders:
            alpha = float(alpha)
            rows = []  # (name, lhs per state, rhs function of purity, eta)
            if alpha == INF:
                lhs = renyi(probs, INF)
                rows.append(("min_entropy", lhs, lambda pur: min_entropy_bound(a, d, pur), None))
                rows.append(("renyi_limit", lhs, lambda pur: renyi_limit_bound(a, d, pur), None))
            else:
                if alpha <= 2.0:
                    rows.append(("tsallis", tsallis(probs, alpha),
                                 lambda pur, al=alpha: tsallis_bound(a, d, pur, al), None))
                    for eta in etas:
                        eta = float(eta)
                        q = np.hstack([eta * probs, np.full((len(probs), 1), 1.0 - eta)])
                        rows.append(("tsallis_eta", tsallis(q, alpha),
                                     lambda pur, al=alpha, e=eta: tsallis_inefficiency_bound(a, d, pur, al, e),
                                     eta))
                if alpha < 2.0:
                    rows.append(("renyi_collision", renyi(probs, alpha),
                                 lambda pur: renyi_collision_bound(a, d, pur), None))
                else:
                    rows.append(("renyi", renyi(probs, alpha),
                                 lambda pur, al=alpha: renyi_bound(a, d, pur, al), None))
            for name, lhs, rhs_fn, eta in rows:
                for s, pur in enumerate(purs):
                    ctx = dict(d=d, a=a, purity=float(pur), state=s, alpha=alpha, **extra)
                    if eta is not None:
                        ctx["eta"] = eta
                    reports.append(BoundReport.make(name, lhs[s], rhs_fn(float(pur)), tol=tol, **ctx))
    return canonical_order(reports)


def check_pair_suite(pairs, n_states: int = 100, s_values=(0.0, 0.25, 0.5), seed=0,
                     include_mixed: bool = True, symmetrized: bool = True, tol=None) -> list[BoundReport]:
    """Pair bounds for each (M, N) in ``pairs``, each state and each s.

    For every s the orders are (alpha, beta) = (1/(1-s), 1/(1+s)).
    """
    rng = as_rng(seed)
    states_by_dim = {}
    reports = []
    for k, (m, n) in enumerate(pairs):
        _same_dim(m, n)
        d = m.dim
        if d not in states_by_dim:
            states_by_dim[d] = sample_states(d, n_states, rng, include_mixed)
        fbar = pair_fbar(m, n)
        for s_idx, rho in enumerate(states_by_dim[d]):
            for s in s_values:
                alpha, beta = conjugate_orders(float(s))
                reports += pair_bounds(m, n, rho, alpha, beta, fbar=fbar, tol=tol,
                                       povm=k, state=s_idx, s=float(s))
                if symmetrized:
                    reports += symmetrized_pair_bounds(m, n, rho, float(s), fbar=fbar, tol=tol,
                                                       povm=k, state=s_idx)
    return canonical_order(reports)


def violations(reports) -> list[BoundReport]:
    return [r for r in reports if not r.satisfied]
