import numpy as np
import pytest
from scipy import integrate, special as sc


def quad_beta(v, p, q):
    """Regularized incomplete beta by algebraic-weight quadrature."""
    if v == 0.0:
        return 0.0
    val, _ = integrate.quad(lambda t: 1.0, 0.0, v, weight="alg", wvar=(p - 1.0, 0.0))
    if q != 1.0:
        val, _ = integrate.quad(lambda t: (1.0 - t) ** (q - 1.0), 0.0, v,
                                weight="alg", wvar=(p - 1.0, 0.0),
                                epsabs=1e-15, epsrel=1e-13, limit=200)
    return val / np.exp(sc.betaln(p, q))


def quad_gamma(s, x):
    """Regularized lower incomplete gamma by algebraic-weight quadrature."""
    val, _ = integrate.quad(lambda t: np.exp(-t), 0.0, x, weight="alg", wvar=(s - 1.0, 0.0),
                            epsabs=1e-15, epsrel=1e-13, limit=200)
    return val / sc.gamma(s)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")
    config._acceptance = {}


def pytest_runtest_logreport(report):
    item_marks = getattr(report, "acceptance", None)
    if item_marks is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        store = _store(report)
        number, title = item_marks
        prev = store.get(number, (title, True))
        store[number] = (title, prev[1] and report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report.acceptance = tuple(mark.args)
        report._config = item.config


def _store(report):
    return report._config._acceptance


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
