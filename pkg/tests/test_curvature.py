import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flatcyl.curvature import (
    CurvatureField,
    GridMismatchError,
    GridSpec,
    MetricField,
    brioschi_curvature,
    killing_residual,
    riemann_component,
    translation_isometry,
    write_curvature_csv,
)
from flatcyl.expr import parse_expression
from flatcyl.metric import CylinderPoint, FlatMetric, SignatureError
from flatcyl.specfile import parse_metric_spec

from conftest import metrics
from exact_brioschi import CURVED, STANDARD, exact_K, sampler


@pytest.fixture(scope="module")
def curved_exact():
    return exact_K(*CURVED)


@pytest.fixture(scope="module")
def standard_exact():
    return exact_K(*STANDARD)


def field_of(family, n, y_min=-1.0, y_max=1.0):
    grid = GridSpec(n, n, y_min, y_max)
    X, Y = grid.nodes()
    return MetricField(grid, *sampler(family)(X, Y))


def interior_error(field, exact):
    X, Y = field.grid.nodes()
    K = brioschi_curvature(field)
    return float(np.max(np.abs(K.K - exact(X, Y))[1:-1]))


# -- grid / field


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(3, 8, 0, 1)
    with pytest.raises(ValueError):
        GridSpec(8, 8, 1, 1)
    g = GridSpec(8, 5, -1, 1)
    X, Y = g.nodes()
    assert X.shape == (5, 8)
    assert X[0, 1] == 1 / 8 and Y[-1, 0] == 1.0


def test_pointwise_signature_error_names_node():
    grid = GridSpec(8, 8, -1, 1)
    with pytest.raises(SignatureError, match=r"i=\d+, j=\d+"):
        MetricField.from_functions(grid, lambda X, Y: 1 + 0 * X, lambda X, Y: 0 * X, lambda X, Y: Y)


def test_from_spec_applies_conformal_factor():
    spec = parse_metric_spec("type = conformal\nE = 1\nF = 0\nG = 1\npsi = 0.5*y")
    f = MetricField.from_spec(spec, GridSpec(8, 8, -1, 1))
    _, Y = f.grid.nodes()
    np.testing.assert_allclose(f.gxx, -np.exp(Y))
    np.testing.assert_allclose(f.gyy, np.exp(Y))


# -- constant fields


@pytest.mark.parametrize("m", [(2, 1, 3), (1, 0, 1), (0, 1, 0), (-1, 0.5, -2)])
def test_constant_fields_are_exactly_flat(m):
    f = MetricField.from_flat(FlatMetric(*m), GridSpec(64, 64, -1, 1))
    K = brioschi_curvature(f)
    assert np.max(np.abs(K.K)) < 1e-12
    assert not K.K.any()
    assert not riemann_component(f, K).any()


@given(metrics())
def test_any_constant_field_is_flat(m):
    f = MetricField.from_flat(m, GridSpec(8, 6, -2, 3))
    assert not brioschi_curvature(f).K.any()
    assert killing_residual(f, "x") == 0 and killing_residual(f, "y") == 0


# -- variable fields against the symbolic oracle


def test_standard_field_matches_exact(standard_exact):
    assert interior_error(field_of(STANDARD, 256), standard_exact) < 1e-4


def test_curved_field_matches_exact(curved_exact):
    assert interior_error(field_of(CURVED, 256), curved_exact) < 1e-4


def test_second_order_convergence(curved_exact):
    errs = [interior_error(field_of(CURVED, n), curved_exact) for n in (64, 128, 256)]
    for coarse, fine in zip(errs, errs[1:]):
        assert 3.5 < coarse / fine < 4.5


def test_boundary_rows_are_reported_and_finite(curved_exact):
    K = brioschi_curvature(field_of(CURVED, 32))
    assert K.K.shape == (32, 32) and np.isfinite(K.K).all()
    assert K.interior().shape == (30, 32)


@pytest.mark.parametrize("c", [0.5, 2.0, 7.25])
def test_homogeneity(c):
    f = field_of(CURVED, 48)
    scaled = MetricField(f.grid, c * f.gxx, c * f.gxy, c * f.gyy)
    np.testing.assert_allclose(brioschi_curvature(scaled).K, brioschi_curvature(f).K / c, rtol=1e-8, atol=1e-14)


# -- Riemann component


def test_riemann_component_examples():
    grid = GridSpec(8, 8, 0, 1)
    f = MetricField(grid, -1.0, 0.0, 1.0)
    assert (riemann_component(f, CurvatureField(grid, np.ones((8, 8)))) == -1).all()
    assert not riemann_component(f, CurvatureField(grid, np.zeros((8, 8)))).any()


def test_riemann_grid_mismatch():
    f = MetricField(GridSpec(8, 8, 0, 1), -1.0, 0.0, 1.0)
    with pytest.raises(GridMismatchError):
        riemann_component(f, CurvatureField(GridSpec(8, 8, 0, 2), np.zeros((8, 8))))


# -- Killing residuals and translations


def test_killing_examples():
    f = MetricField.from_flat(FlatMetric(1, 0, 1), GridSpec(16, 16, -1, 1))
    assert killing_residual(f, "x") == 0
    assert killing_residual(f, "y") == 0
    affine = MetricField.from_expressions(
        GridSpec(16, 16, -1, 1), parse_expression("1"), parse_expression("0"), parse_expression("1 + 0.5*y")
    )
    assert killing_residual(affine, "y") == pytest.approx(0.5, abs=1e-10)
    assert killing_residual(affine, "x") == 0
    with pytest.raises(ValueError):
        killing_residual(f, "z")


def test_x_independent_field_has_no_x_residual():
    f = MetricField.from_functions(
        GridSpec(16, 12, -1, 1), lambda X, Y: 1 + 0.1 * Y ** 2, lambda X, Y: 0.3 * Y, lambda X, Y: 2 + 0 * X
    )
    assert killing_residual(f, "x") == 0
    assert killing_residual(f, "y") > 0


@pytest.mark.parametrize(
    "p, q, expected",
    [((0.2, 1.0), (0.7, -2.0), (0.5, -3.0)), ((0.3, 0.4), (0.3, 0.4), (0.0, 0.0)), ((0.9, 0), (0.1, 0), (0.2, 0))],
)
def test_translation_isometry_examples(p, q, expected):
    p, q = CylinderPoint(*p), CylinderPoint(*q)
    dx, dy = translation_isometry(p, q)
    assert (dx, dy) == pytest.approx(expected, abs=1e-15)
    assert p.translated(dx, dy).x == pytest.approx(q.x, abs=1e-15)


coord = st.floats(min_value=-5, max_value=5)


@given(coord, coord, coord, coord, coord, coord)
def test_translations_compose(x0, y0, dx1, dy1, dx2, dy2):
    p = CylinderPoint(x0, y0)
    two_steps = p.translated(dx1, dy1).translated(dx2, dy2)
    one_step = p.translated((dx1 + dx2) % 1.0, dy1 + dy2)
    gap = abs(two_steps.x - one_step.x)
    assert min(gap, 1 - gap) < 1e-12
    assert two_steps.y == pytest.approx(one_step.y, abs=1e-12)
    sx, sy = translation_isometry(p, two_steps)
    assert 0 <= sx < 1
    assert math.isclose(sy, two_steps.y - p.y)


# -- export


def test_curvature_csv_format():
    grid = GridSpec(4, 4, 0, 1)
    K = brioschi_curvature(MetricField.from_flat(FlatMetric(1, 0, 1), grid))
    buf = io.StringIO()
    write_curvature_csv(K, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,y,K"
    assert len(lines) == 17
    assert lines[1] == "0,0,0"
    assert lines[2] == "0.25,0,0"
    assert lines[5] == "0,0.33333333333333331,0"
