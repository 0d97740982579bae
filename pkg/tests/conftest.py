import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from igl_cyclic.core import BOT, And, Box, FMultiset, Imp, Or, Var, seq

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("IGL_CYCLIC_EXAMPLES", 100)),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

atoms = st.sampled_from([Var("p"), Var("q"), Var("r"), BOT])


def formulas(max_leaves: int = 6):
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            st.builds(Box, sub),
            st.builds(Imp, sub, sub),
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
        ),
        max_leaves=max_leaves,
    )


def multisets(max_size: int = 4, leaves: int = 4):
    return st.lists(formulas(leaves), max_size=max_size).map(FMultiset)


def sequents(max_left: int = 3, leaves: int = 4):
    return st.builds(seq, st.lists(formulas(leaves), max_size=max_left), formulas(leaves))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
