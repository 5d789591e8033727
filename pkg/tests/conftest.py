import numpy as np
import pytest

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.name.startswith("test_criterion_"):
        _criteria[item.name] = rep.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_criteria):
        status = "PASS" if _criteria[name] else "FAIL"
        terminalreporter.write_line(f"{name}: {status}")


@pytest.fixture
def rng():
    return np.random.default_rng(20210814)


def random_measure(rng, n, N, scale=1.0):
    """Random weighted point cloud with weights normalized to one."""
    from mildrep import DiscreteMeasure
    pts = scale * rng.standard_normal((N, n))
    w = rng.random(N) + 0.05
    return DiscreteMeasure(pts, w / w.sum())
