import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from siclab.sic import depolarize_sic, rank_one_sic, sic_from_vectors, wh_orbit

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def load_d4_fiducial():
    data = json.loads((DATA / "fiducial_d4.json").read_text())
    v = np.array([complex(re, im) for re, im in data["vector"]])
    return v / np.linalg.norm(v)


def rank_one(d):
    if d == 4:
        return sic_from_vectors(wh_orbit(load_d4_fiducial()))
    return rank_one_sic(d)


@pytest.fixture
def rng():
    return np.random.default_rng(20131017)


@pytest.fixture(scope="session")
def qubit_sic():
    return rank_one_sic(2)


@pytest.fixture(scope="session")
def qutrit_sic():
    return rank_one_sic(3)


@pytest.fixture(scope="session", params=[(2, 1.0), (2, 0.5), (3, 1.0), (3, 0.3), (4, 0.7)],
                ids=lambda p: f"d{p[0]}-lam{p[1]}")
def general_sic(request):
    d, lam = request.param
    return depolarize_sic(rank_one(d), lam)


def random_hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (g + g.conj().T)


ACCEPTANCE_LINES = []


def record_criterion(label, ok, detail=""):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
