import numpy as np
import pytest
from hypothesis import assume, strategies as st

from flatcyl.metric import FlatMetric, TangentVector

# exact zeros matter (E = 0 is a class of its own); tiny magnitudes only overflow
coeff = st.one_of(
    st.just(0.0),
    st.floats(min_value=-3, max_value=3).filter(lambda c: abs(c) >= 1e-6),
)
nonzero = st.floats(min_value=-5, max_value=5, allow_nan=False).filter(lambda v: abs(v) > 1e-3)


@st.composite
def metrics(draw, E=None):
    e = draw(coeff) if E is None else E
    f, g = draw(coeff), draw(coeff)
    if e * g + f * f <= 0:
        g = -g  # E*G <= -F^2 <= 0, so flipping G makes the discriminant |EG| + F^2
    assume(e * g + f * f > 1e-6)
    return FlatMetric(e, f, g)


@st.composite
def vectors(draw, lo=-5.0, hi=5.0):
    comp = st.one_of(st.just(0.0), st.floats(min_value=lo, max_value=hi).filter(lambda c: abs(c) >= 1e-6))
    a, b = draw(comp), draw(comp)
    assume(a != 0 or b != 0)
    return TangentVector(a, b)


def random_metrics(rng, n, cond=lambda E, F, G: True):
    """``n`` Lorentzian triples uniform on [-3, 3]^3 subject to ``cond``."""
    out = []
    while len(out) < n:
        E, F, G = rng.uniform(-3, 3, 3)
        if E * G + F * F > 0 and cond(E, F, G):
            out.append(FlatMetric(E, F, G))
    return out


def random_cnc_metrics(rng, n, min_abs_f=0.2):
    out = []
    while len(out) < n:
        F, G = rng.uniform(-3, 3, 2)
        if abs(F) >= min_abs_f:
            out.append(FlatMetric(0.0, F, G))
    return out


def random_psi(rng, depth=3):
    """Random x-periodic conformal factor as source text."""
    if depth == 0 or rng.random() < 0.25:
        choice = rng.integers(4)
        if choice == 0:
            return repr(round(float(rng.uniform(-2, 2)), 3))
        if choice == 1:
            return f"{round(float(rng.uniform(0, 0.3)), 3)}*y"
        n = int(rng.integers(1, 4))
        return f"{'sin' if choice == 2 else 'cos'}({2 * n}*pi*x)"
    op = rng.integers(5)
    left, right = random_psi(rng, depth - 1), random_psi(rng, depth - 1)
    if op == 0:
        return f"({left} + {right})"
    if op == 1:
        return f"({left} - {right})"
    if op == 2:
        return f"sin({left}) * cos({right})"
    if op == 3:
        return f"exp(sin({left}))"
    return f"0.5*({left})^2"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
