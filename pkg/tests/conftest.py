import numpy as np
import pytest

from album import gallery, prox


def _linear_composite():
    rng = np.random.default_rng(11)
    U, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    Q = U @ np.diag([1.0, 0.7, 0.4, 0.2]) @ U.T
    return gallery.linear_composite_problem(Q, rng.standard_normal(4), np.eye(4), "l1", weight=0.3)


def gallery_problems():
    """One instance of every gallery builder, keyed by a short name."""
    rng = np.random.default_rng(2024)
    return {
        "sphere": gallery.sphere_problem(rng.standard_normal(5), 0.5),
        "feasibility": gallery.feasibility_problem([prox.Ball([0.0, 0.0], 1.0),
                                                    prox.Ball([1.0, 0.0], 1.0)]),
        "sparsity": gallery.sparsity_problem(rng.standard_normal((16, 8)),
                                             rng.standard_normal(16), 2),
        "l1_equality": gallery.l1_equality_problem(
            gallery.Quadratic(np.diag([2.0, 1.0, 1.5]), np.array([1.0, -1.0, 0.5])),
            gallery.LinearMap(np.array([[1.0, 1.0, 0.0], [0.0, 1.0, -1.0]])), [1.0, 2.0]),
        "linear_composite": _linear_composite(),
    }


@pytest.fixture(scope="session")
def problems():
    return gallery_problems()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


ACCEPTANCE_LINES = {}


def record_criterion(number, passed, detail=""):
    ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
