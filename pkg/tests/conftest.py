import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ttg.spaces import FiniteSpectralSpace, SpectralMap

settings.register_profile(
    "repo", derandomize=True, max_examples=150, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@st.composite
def posets(draw, min_size=1, max_size=6):
    n = draw(st.integers(min_size, max_size))
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    rel = np.triu(np.array(bits, dtype=bool).reshape(n, n), k=1)
    perm = draw(st.permutations(range(n)))
    rel = rel[np.ix_(perm, perm)] | np.eye(n, dtype=bool)
    return FiniteSpectralSpace.from_leq([f"p{i}" for i in range(n)], rel)


@st.composite
def spectral_maps(draw, max_domain=6, max_codomain=4, surjective=None):
    X = draw(posets(1, max_domain))
    Y = draw(posets(1, max_codomain))
    assign = np.full(len(X), -1, dtype=np.int64)
    for i in X.linear_extension():
        allowed = np.ones(len(Y), dtype=bool)
        for j in range(len(X)):
            if assign[j] >= 0 and X.leq[j, i]:
                allowed &= Y.leq[assign[j]]
        choices = np.flatnonzero(allowed).tolist()
        if not choices:
            # lower images with no common upper bound; fall back to a constant map
            assign[:] = 0
            break
        assign[i] = draw(st.sampled_from(choices))
    m = SpectralMap.from_indices(X, Y, assign)
    if surjective is not None and m.is_surjective() != surjective:
        from hypothesis import assume
        assume(False)
    return m


@pytest.fixture(scope="session")
def small_corpus():
    from ttg.enumerate import corpus
    return list(corpus(4, 3))
