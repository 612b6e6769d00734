"""Generalized entropies of probability distributions (natural logarithms).

Orders are plain floats; ``INF`` selects the min-entropy branch of ``renyi``.
Zero probabilities contribute nothing to any sum.  Functions taking a
distribution also accept a 2-D array and then work row by row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import SicLabError, UnsupportedOrder
from .linalg import INF
from .sic import ProbabilityDistribution

ALPHA_ONE_TOL = 1e-8


def _is_one(alpha: float) -> bool:
    return abs(alpha - 1.0) < ALPHA_ONE_TOL


def _check_order(alpha: float, allow_inf: bool = False) -> float:
    alpha = float(alpha)
    if alpha == INF:
        if not allow_inf:
            raise UnsupportedOrder("infinite order is only defined for the Renyi family")
        return alpha
    if not alpha > 0.0:
        raise UnsupportedOrder(f"entropy order must be positive, got {alpha!r}")
    return alpha


def _probs(p) -> np.ndarray:
    if isinstance(p, ProbabilityDistribution):
        return p.probs
    if isinstance(p, DistortedDistribution):
        return p.probs
    return np.asarray(p, dtype=np.float64)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def alpha_log(x, alpha: float):
    """ln_alpha(x) = (x^(1-alpha) - 1) / (1 - alpha); natural log near alpha = 1."""
    alpha = _check_order(alpha)
    if isinstance(x, (float, int)):
        if x <= 0:
            raise SicLabError("alpha_log needs x > 0")
        return math.log(x) if _is_one(alpha) else math.expm1((1.0 - alpha) * math.log(x)) / (1.0 - alpha)
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0):
        raise SicLabError("alpha_log needs x > 0")
    if _is_one(alpha):
        return _scalar(np.log(x))
    return _scalar(np.expm1((1.0 - alpha) * np.log(x)) / (1.0 - alpha))


def shannon(p):
    return _scalar(_kernels.shannon_rows(_probs(p)))


def index_of_coincidence(p):
    """C(p) = sum_j p_j^2."""
    q = _probs(p)
    return _scalar(np.sum(q * q, axis=-1))


def tsallis(p, alpha: float):
    """Tsallis entropy (sum p^alpha - 1) / (1 - alpha)."""
    alpha = _check_order(alpha)
    q = _probs(p)
    if _is_one(alpha):
        return shannon(q)
    return _scalar((_kernels.power_sums(q, alpha) - 1.0) / (1.0 - alpha))


def renyi(p, alpha: float):
    """Renyi entropy ln(sum p^alpha) / (1 - alpha); ``alpha=INF`` is -ln max p."""
    alpha = _check_order(alpha, allow_inf=True)
    q = _probs(p)
    if alpha == INF:
        return _scalar(-np.log(np.max(q, axis=-1)))
    if _is_one(alpha):
        return shannon(q)
    if alpha == 2.0:
        return _scalar(-np.log(np.sum(q * q, axis=-1)))
    return _scalar(np.log(_kernels.power_sums(q, alpha)) / (1.0 - alpha))


@dataclass(frozen=True, eq=False)
class DistortedDistribution:
    """Outcome statistics of an inefficient detector: eta * p plus a no-click cell."""

    base: ProbabilityDistribution
    eta: float
    probs: np.ndarray  # last entry is the no-click probability 1 - eta

    @property
    def no_click(self) -> float:
        return float(self.probs[-1])


def distort(p, eta: float) -> DistortedDistribution:
    if not 0.0 <= eta <= 1.0:
        raise SicLabError(f"detector efficiency must lie in [0, 1], got {eta!r}")
    base = p if isinstance(p, ProbabilityDistribution) else ProbabilityDistribution(p)
    probs = np.append(eta * base.probs, 1.0 - eta)
    probs.flags.writeable = False
    return DistortedDistribution(base, float(eta), probs)


def binary_tsallis(eta: float, alpha: float) -> float:
    """h_alpha(eta) = -eta^alpha ln_alpha(eta) - (1-eta)^alpha ln_alpha(1-eta)."""
    alpha = _check_order(alpha)
    if not 0.0 <= eta <= 1.0:
        raise SicLabError(f"eta must lie in [0, 1], got {eta!r}")
    total = 0.0
    for x in (eta, 1.0 - eta):
        if x > 0.0:
            total -= x**alpha * alpha_log(x, alpha)
    return total


def conjugate_orders(s: float) -> tuple[float, float]:
    """(alpha, beta) = (1/(1-s), 1/(1+s)), so that 1/alpha + 1/beta = 2."""
    if not 0.0 <= s < 1.0:
        raise SicLabError(f"s must lie in [0, 1), got {s!r}")
    return 1.0 / (1.0 - s), 1.0 / (1.0 + s)


def symmetrized_tsallis(p, s: float):
    alpha, beta = conjugate_orders(s)
    return 0.5 * (tsallis(p, alpha) + tsallis(p, beta))


def symmetrized_renyi(p, s: float):
    alpha, beta = conjugate_orders(s)
    return 0.5 * (renyi(p, alpha) + renyi(p, beta))

