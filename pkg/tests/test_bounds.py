import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from siclab.bounds import (
    PAIR_BOUND_NAMES,
    BoundReport,
    check_bound_suite,
    check_pair_suite,
    ic_bloch,
    ic_exact,
    ic_residuals,
    max_prob_bound,
    max_prob_lemma,
    min_entropy_bound,
    pair_bounds,
    pair_fbar,
    pair_fbar_sq,
    pair_g,
    renyi_bound,
    renyi_collision_bound,
    renyi_limit_bound,
    sample_states,
    tol_bound,
    tsallis_bound,
    tsallis_bound_bloch,
    tsallis_inefficiency_bound,
    violations,
)
from siclab.entropy import alpha_log, shannon, tsallis
from siclab.errors import OutOfRange, SicLabError, UnsupportedOrder
from siclab.linalg import INF, bloch_from_density, maximally_mixed, purity, random_density
from siclab.sic import depolarize_sic, probabilities, rank_one_sic, unitary_rotate

from .conftest import rank_one

PARAMS = [(2, 0.25), (2, 0.15625), (3, 1 / 9), (3, 0.05), (4, 0.03)]


@pytest.mark.parametrize("d,a", PARAMS)
def test_ic_exact_special_cases(d, a):
    assert ic_exact(a, d, 1 / d) == pytest.approx(d**-2, abs=1e-15)
    pur = 0.7
    assert ic_exact(d**-2, d, pur) == pytest.approx((pur + 1) / (d * (d + 1)), abs=1e-15)


def test_ic_qubit_closed_form():
    assert ic_exact(0.25, 2, 1.0) == pytest.approx(1 / 3, abs=1e-15)
    for a in (0.13, 0.2, 0.25):
        for r in (0.0, 0.4, 1.0):
            want = (3 + (8 * a - 1) * r * r) / 12
            assert ic_exact(a, 2, (1 + r * r) / 2) == pytest.approx(want, abs=1e-12)
            assert ic_bloch(a, 2, r * r) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("d,a", PARAMS)
def test_ic_bloch_agrees_with_purity_form(rng, d, a):
    assert ic_bloch(a, d, 0.0) == pytest.approx(d**-2)
    for _ in range(20):
        rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
        r2 = bloch_from_density(rho).norm_sq()
        assert ic_bloch(a, d, r2) == pytest.approx(ic_exact(a, d, purity(rho)), abs=1e-12)


def test_ic_argument_checks():
    with pytest.raises(OutOfRange):
        ic_exact(2**-3, 2, 0.5)
    with pytest.raises(OutOfRange):
        ic_exact(0.3, 2, 0.5)
    with pytest.raises(OutOfRange):
        ic_exact(0.2, 2, 0.4)
    with pytest.raises(OutOfRange):
        ic_bloch(0.2, 2, 1.2)


def test_ic_matches_measured_index(general_sic, rng):
    states = sample_states(general_sic.dim, 50, rng)
    assert ic_residuals(general_sic, states).max() < 1e-10


@pytest.mark.parametrize("d,a", PARAMS)
@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7, 2.0])
def test_tsallis_bound_closed_forms(d, a, alpha):
    assert tsallis_bound(a, d, 1 / d, alpha) == pytest.approx(alpha_log(d * d, alpha), rel=1e-12)
    want = alpha_log(d * (d + 1) / (a * d * d + 1), alpha)
    assert tsallis_bound(a, d, 1.0, alpha) == pytest.approx(want, rel=1e-12)
    assert tsallis_bound_bloch(a, d, d * (d - 1) / 2, alpha) == pytest.approx(want, rel=1e-12)


def test_tsallis_bound_order_range():
    for alpha in (2.5, INF, 0.0):
        with pytest.raises(UnsupportedOrder):
            tsallis_bound(0.2, 2, 0.7, alpha)


def test_tsallis_bound_saturates_at_order_two(general_sic, rng):
    d, a = general_sic.dim, general_sic.a
    for _ in range(20):
        rho = random_density(d, seed=rng)
        p = probabilities(general_sic, rho)
        assert tsallis(p, 2.0) == pytest.approx(tsallis_bound(a, d, purity(rho), 2.0), abs=1e-10)


def test_inefficiency_bound_edges():
    a, d, pur, alpha = 0.2, 2, 0.8, 1.3
    assert tsallis_inefficiency_bound(a, d, pur, alpha, 1.0) == pytest.approx(tsallis_bound(a, d, pur, alpha))
    assert tsallis_inefficiency_bound(a, d, pur, alpha, 0.0) == 0.0
    with pytest.raises(OutOfRange):
        tsallis_inefficiency_bound(a, d, pur, alpha, 1.1)


@pytest.mark.parametrize("d,a", PARAMS)
def test_renyi_bound_closed_forms(d, a):
    pur = 0.5 * (1 / d + 1)
    assert renyi_bound(a, d, pur, 2.0) == pytest.approx(-math.log(ic_exact(a, d, pur)))
    assert renyi_collision_bound(a, d, pur) == pytest.approx(renyi_bound(a, d, pur, 2.0))
    alpha = 5.0
    want = alpha / (2 * (alpha - 1)) * math.log(d * (d + 1) / (a * d * d + 1))
    assert renyi_bound(a, d, 1.0, alpha) == pytest.approx(want, rel=1e-12)
    # large-order limit at the maximally mixed state recovers only ln d
    assert renyi_limit_bound(a, d, 1 / d) == pytest.approx(math.log(d))
    assert renyi_bound(a, d, 1 / d, 1e9) == pytest.approx(math.log(d), rel=1e-8)


def test_renyi_bound_order_routing():
    with pytest.raises(UnsupportedOrder):
        renyi_bound(0.2, 2, 0.7, 1.5)
    with pytest.raises(UnsupportedOrder):
        renyi_bound(0.2, 2, 0.7, INF)


@pytest.mark.parametrize("d,a", PARAMS)
def test_min_entropy_bound(d, a, rng):
    assert min_entropy_bound(a, d, 1 / d) == pytest.approx(2 * math.log(d), abs=1e-12)
    for pur in np.linspace(1 / d, 1, 7):
        assert min_entropy_bound(a, d, pur) == pytest.approx(-math.log(max_prob_bound(a, d, pur)))
        assert min_entropy_bound(a, d, pur) >= renyi_limit_bound(a, d, pur) - 1e-12
    pur = 0.9
    rank_one_form = 2 * math.log(d) - math.log(1 + math.sqrt(d - 1) * math.sqrt(pur * d - 1))
    assert min_entropy_bound(d**-2, d, pur) == pytest.approx(rank_one_form)


def test_max_probability_bound_holds(general_sic, rng):
    d, a = general_sic.dim, general_sic.a
    for rho in sample_states(d, 40, rng):
        p = probabilities(general_sic, rho).probs
        assert p.max() <= max_prob_bound(a, d, purity(rho)) + 1e-12


def test_max_prob_lemma_cases(rng):
    assert max_prob_lemma(np.full(9, 1 / 9)) == pytest.approx(1 / 9)
    assert max_prob_lemma([1.0, 0, 0, 0]) == pytest.approx(1.0)
    for n in (4, 9, 16):
        for _ in range(200):
            x = rng.dirichlet(np.full(n, 0.5))
            assert x.max() <= max_prob_lemma(x) + 1e-12
    with pytest.raises(SicLabError):
        max_prob_lemma([0.5, 0.6])


@pytest.mark.parametrize("d,a", PARAMS[1:])
def test_bounds_decrease_with_purity(d, a):
    purs = np.linspace(1 / d, 1, 9)
    for fn, alpha in ((tsallis_bound, 0.5), (tsallis_bound, 2.0), (renyi_bound, 3.0)):
        vals = [fn(a, d, p, alpha) for p in purs]
        assert all(x > y for x, y in zip(vals, vals[1:]))
    vals = [min_entropy_bound(a, d, p) for p in purs]
    assert all(x > y for x, y in zip(vals, vals[1:]))


# -- pairs ------------------------------------------------------------------

def _rotated_pair(d, lam_m=1.0, lam_n=1.0, seed=7):
    base = rank_one(d)
    u = unitary_group.rvs(d, random_state=seed)
    return depolarize_sic(base, lam_m), unitary_rotate(depolarize_sic(base, lam_n), u)


def test_pair_g_brute_force_qubit():
    m, n = _rotated_pair(2)
    rho = np.eye(2) / 2
    best = 0.0
    for mi in m.elements:
        for nj in n.elements:
            cell = abs(np.trace(mi @ nj @ rho))
            best = max(best, cell / math.sqrt(np.trace(mi @ rho).real * np.trace(nj @ rho).real))
    assert pair_g(m, n, rho) == pytest.approx(best, rel=1e-12)


def test_pair_g_skips_zero_probability_cells(qubit_sic):
    _, vecs = np.linalg.eigh(qubit_sic.elements[0])
    orth = vecs[:, 0]  # orthogonal to the first SIC vector
    rho = np.outer(orth, orth.conj())
    assert probabilities(qubit_sic, rho).probs[0] < 1e-14
    g = pair_g(qubit_sic, qubit_sic, rho)
    assert np.isfinite(g) and g <= pair_fbar(qubit_sic, qubit_sic) + 1e-12


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("lams", [(1.0, 1.0), (0.5, 0.8), (0.3, 1.0)])
def test_pair_chain(rng, d, lams):
    m, n = _rotated_pair(d, *lams)
    fbar = pair_fbar(m, n)
    assert fbar**2 == pytest.approx(pair_fbar_sq(m, n), rel=1e-10)
    assert fbar**2 <= math.sqrt(m.a * n.a) + 1e-12
    for rho in sample_states(d, 30, rng):
        assert pair_g(m, n, rho) <= fbar + 1e-12


def test_pair_fbar_rank_one_saturates():
    m, n = _rotated_pair(3)
    assert pair_fbar(m, n) ** 2 == pytest.approx(math.sqrt(m.a * n.a), rel=1e-10)
    assert m.a * n.a == pytest.approx(3**-4)


@pytest.mark.parametrize("d", [2, 3])
def test_pair_bounds_rank_one_parameter_values(d):
    m, n = _rotated_pair(d)
    for s in (0.0, 0.4):
        alpha, beta = 1 / (1 - s), 1 / (1 + s)
        reps = {r.bound_name: r for r in pair_bounds(m, n, maximally_mixed(d), alpha, beta)}
        assert set(reps) == set(PAIR_BOUND_NAMES)
        assert reps["pair_tsallis_param"].rhs == pytest.approx(alpha_log(d * d, alpha), rel=1e-12)
        assert reps["pair_renyi_param"].rhs == pytest.approx(2 * math.log(d), abs=1e-12)
        # uniform outcome distributions on both measurements
        assert reps["pair_renyi_g"].lhs == pytest.approx(4 * math.log(d))
        assert reps["pair_tsallis_g"].lhs == pytest.approx(alpha_log(d * d, alpha) + alpha_log(d * d, beta))
        assert all(r.satisfied for r in reps.values())


def test_pair_bounds_shannon_case(rng):
    m, n = _rotated_pair(3, 0.6, 0.9)
    rho = random_density(3, seed=rng)
    reps = {r.bound_name: r for r in pair_bounds(m, n, rho, 1.0, 1.0)}
    pm, pn = probabilities(m, rho), probabilities(n, rho)
    lhs = shannon(pm) + shannon(pn)
    assert reps["pair_renyi_param"].lhs == pytest.approx(lhs)
    assert reps["pair_renyi_param"].rhs == pytest.approx(-(math.log(m.a) + math.log(n.a)) / 2)
    assert lhs >= reps["pair_renyi_param"].rhs


def test_pair_bounds_conjugacy_checked(qubit_sic):
    with pytest.raises(SicLabError):
        pair_bounds(qubit_sic, qubit_sic, np.eye(2) / 2, 2.0, 2.0)


def test_pair_nontrivial_for_general_sics():
    m, n = _rotated_pair(2, 0.5, 0.7)
    reps = {r.bound_name: r for r in pair_bounds(m, n, np.eye(2) / 2, 1.5, 0.75)}
    assert reps["pair_renyi_param"].rhs > 2 * math.log(2)
    assert reps["pair_tsallis_param"].rhs > alpha_log(4, 1.5)


# -- reports and suites ----------------------------------------------------

def test_bound_report_tolerance(monkeypatch):
    assert BoundReport.make("x", 1.0, 1.0 + 5e-11).satisfied
    assert not BoundReport.make("x", 1.0, 1.0 + 5e-10).satisfied
    monkeypatch.setenv("SICLAB_TOL", "1e-6")
    assert tol_bound() == 1e-6
    assert BoundReport.make("x", 1.0, 1.0 + 5e-10).satisfied


def test_bound_suite_saturation_rows():
    sics = [depolarize_sic(rank_one_sic(3), lam) for lam in (0.5, 1.0)]
    reps = check_bound_suite(sics, n_states=20, orders=(0.5, 1.0, 2.0, 4.0, INF), etas=(0.5,), seed=3)
    assert not violations(reps)
    mixed = [r for r in reps if r.context["state"] == 0]
    for r in mixed:
        if r.bound_name in ("tsallis", "tsallis_eta", "renyi_collision", "min_entropy"):
            assert r.saturated, r
    for r in reps:
        if r.bound_name == "tsallis" and r.context["alpha"] == 2.0:
            assert r.saturated
    keys = [(r.context["povm"], r.context["state"], r.bound_name) for r in reps]
    assert keys == sorted(keys)


def test_pair_suite_ordering_and_symmetrized():
    m, n = _rotated_pair(2, 0.6, 1.0)
    reps = check_pair_suite([(m, n)], n_states=10, s_values=(0.0, 0.5), seed=1)
    assert not violations(reps)
    names = {r.bound_name for r in reps}
    assert {"sym_tsallis_g", "sym_renyi_param"} <= names
    by_cell = {}
    for r in reps:
        by_cell.setdefault((r.context["state"], r.context["s"], r.bound_name[:3]), {})[r.bound_name] = r.rhs
    for group in by_cell.values():
        for fam in ("tsallis", "renyi"):
            keys = [k for k in group if fam in k]
            vals = sorted(((k.rsplit("_", 1)[1], group[k]) for k in keys))
            d = dict(vals)
            assert d["g"] >= d["fbar"] - 1e-12 >= d["param"] - 2e-12
