import numpy as np
import pytest

from qmon.operators import make_rng


def random_povm(dim, outcomes, seed):
    """Random full-rank POVM from normalized Gaussian positive operators."""
    rng = make_rng(seed)
    raw = []
    for _ in range(outcomes):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        raw.append(g @ g.conj().T)
    total = sum(raw)
    evals, evecs = np.linalg.eigh(total)
    inv_sqrt = evecs @ np.diag(evals**-0.5) @ evecs.conj().T
    return [inv_sqrt @ m @ inv_sqrt for m in raw]


def explicit_kron_gate(d, d_b, n, k, gate_on_ae):
    """Full-space matrix of a gate on (A, E_k) built by explicit Kronecker
    products over the basis of A. Independent of ``apply_local``."""
    d_a = d
    total = d_a * d_b * d**n
    u = np.zeros((total, total), dtype=complex)
    g = gate_on_ae.reshape(d_a, d, d_a, d)
    for a in range(d_a):
        for a2 in range(d_a):
            ea = np.zeros((d_a, d_a))
            ea[a, a2] = 1
            block = g[a, :, a2, :]
            factors = [ea, np.eye(d_b)] + [block if i == k else np.eye(d) for i in range(n)]
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            u += term
    return u


@pytest.fixture
def rng():
    return make_rng(12345)


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" in report.nodeid and name.startswith("test_criterion_"):
        _criteria[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        number, _, label = name[len("test_criterion_"):].partition("_")
        terminalreporter.write_line(f"{_criteria[name]}  criterion {int(number)}: {label.replace('_', ' ')}")
