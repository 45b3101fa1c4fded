from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from hexstable.exterior import BASIS, Form  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fraction = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def forms(draw, degree: int, density: float = 0.6):
    coeffs = {}
    for m in BASIS[degree]:
        if draw(st.floats(0, 1)) < density:
            coeffs[m] = draw(small_fraction)
    return Form(degree, coeffs)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
