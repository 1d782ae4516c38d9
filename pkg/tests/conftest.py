import cmath
import math
import sys

import numpy as np
from hypothesis import strategies as st

from vortex4.se2 import SE2Element, Se2Momentum, Se2Vector

finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)
angles = st.floats(-math.pi, math.pi, allow_nan=False)
cplx = st.builds(complex, finite, finite)

elements = st.builds(lambda t, a: SE2Element(cmath.exp(1j * t), a), angles, cplx)
vectors = st.builds(Se2Vector, finite, cplx)
momenta = st.builds(Se2Momentum, finite, cplx)


def generic_state(seed: int, n: int = 4, min_sep: float = 0.3) -> np.ndarray:
    """Random well-separated configuration of ``n`` vortices."""
    rng = np.random.default_rng(seed)
    while True:
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        d = np.abs(z[:, None] - z[None, :]) + np.eye(n) * 10
        if d.min() > min_sep:
            return z


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
