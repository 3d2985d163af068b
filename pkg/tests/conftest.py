import os
from fractions import Fraction
from itertools import permutations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
INSTANCE_DIR = os.path.join(ROOT, "instances")


# independent oracles -------------------------------------------------------

def perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def leibniz_eval(terms: dict, vectors) -> Fraction:
    """ω(v_1, …, v_p) = Σ_I c_I Σ_σ sgn σ Π_j v_{σ(j)}[I_j], straight from the definition."""
    p = len(vectors)
    total = Fraction(0)
    for I, c in terms.items():
        assert len(I) == p
        for sigma in permutations(range(p)):
            prod = Fraction(c) * perm_sign(sigma)
            for j in range(p):
                prod *= Fraction(vectors[sigma[j]][I[j] - 1])
                if not prod:
                    break
            total += prod
    return total


# strategies -------------------------------------------------------------------

small_rational = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def vectors(n, count):
    return st.lists(st.lists(small_rational, min_size=n, max_size=n), min_size=count, max_size=count)


@st.composite
def alt_terms(draw, n, p):
    from multisym.exterior import basis_indices

    idx = basis_indices(n, p)
    chosen = draw(st.lists(st.sampled_from(idx), max_size=len(idx), unique=True)) if idx else []
    return {I: draw(small_rational.filter(bool)) for I in chosen}


# acceptance summary ------------------------------------------------------------

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance):
        name = nodeid.split("::")[-1]
        status = "PASS" if _acceptance[nodeid] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
