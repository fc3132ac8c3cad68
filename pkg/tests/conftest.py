import numpy as np
import pytest
from hypothesis import strategies as st

from groupcap.channel import additive_noise_channel, make_channel
from groupcap.group import make_group

SMALL_GROUPS = [
    [(2, 1)],
    [(3, 1)],
    [(2, 2)],
    [(2, 3)],
    [(2, 1), (2, 1)],
    [(2, 1), (3, 1)],
    [(2, 1), (2, 2)],
    [(3, 1), (2, 2)],
    [(2, 1), (2, 1), (3, 1)],
    [(5, 1), (2, 1)],
]


@pytest.fixture
def z4():
    return make_group([(2, 2)])


@pytest.fixture
def z2z3():
    return make_group([(2, 1), (3, 1)])


def z4_additive(noise):
    return additive_noise_channel(make_group([(2, 2)]), noise)


def random_channel(rng, spec, max_outputs=6, alpha=1.0):
    group = make_group(spec)
    ny = int(rng.integers(1, max_outputs + 1))
    return make_channel(group, ny, rng.dirichlet(np.full(ny, alpha), size=group.order))


group_specs = st.sampled_from(SMALL_GROUPS)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[number])
