import pytest
from hypothesis import HealthCheck, settings, strategies as st

from signseq.number import Number, Run
from signseq.ordinal import Ordinal, parse_ordinal

settings.register_profile(
    "signseq", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("signseq")

# small ordinals: coefficient lists for w^2, w, 1
small_ordinals = st.tuples(
    st.integers(0, 2), st.integers(0, 3), st.integers(0, 4),
).map(lambda c: _poly(*c))


def _poly(c2: int, c1: int, c0: int) -> Ordinal:
    return parse_ordinal(f"w^(2)*{c2}+w*{c1}+{c0}", strict=False)


RUN_LENGTHS = ["1", "2", "3", "w", "w+1", "w*2", "w^(2)", "w^(w)", "eps(0)"]
run_lengths = st.sampled_from(RUN_LENGTHS).map(parse_ordinal)


@st.composite
def tail_free_numbers(draw, max_runs: int = 4, lengths=run_lengths):
    n = draw(st.integers(0, max_runs))
    first = draw(st.sampled_from([1, -1]))
    runs = tuple(Run(first * (-1) ** i, draw(lengths)) for i in range(n))
    return Number(runs)


numbers = tail_free_numbers()


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log(request):
    return request.config._acceptance_lines
