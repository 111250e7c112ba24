import numpy as np
import pytest
from numpy.testing import assert_allclose

from splitxray.fields import (HomogeneousFunction, basis_to_degree_minus_2,
                              harmonic_basis)
from splitxray.geometry import Frame, plane_from_chart
from splitxray.inversion import sample_frames
from splitxray.poly import Poly4
from splitxray.xray import (MomentField, QuadratureSpec, circle_integral,
                            circle_points, equivariance_residual,
                            moment_chart_field, random_sl4, xray_chart_field,
                            xray_moments, xray_transform)

E = np.eye(4)
INV_SQ = HomogeneousFunction.radial_power(-2)


def gram_closed_form(frame):
    """Oracle: the transform of |x|^-2 is 2 pi / sqrt(det Gram(u, v))."""
    m = frame.matrix()
    return 2 * np.pi / np.sqrt(np.linalg.det(m @ m.T))


def test_flagship_value():
    value = xray_transform(INV_SQ, Frame(E[0], E[1]), QuadratureSpec(64))
    assert abs(value - 2 * np.pi) < 1e-12


def test_zero_function():
    assert xray_transform(HomogeneousFunction.zero(), Frame(E[0], E[1])) == 0.0


def test_scaled_frame_closed_form():
    value = xray_transform(INV_SQ, Frame(2 * E[0], 3 * E[1]))
    assert_allclose(value, 2 * np.pi / 6, atol=1e-12)


def test_quadratic_moment_vanishes():
    h = Poly4.monomial((2, 0, 0, 0)) - Poly4.monomial((0, 2, 0, 0))
    f = HomogeneousFunction.from_poly(h) * HomogeneousFunction.radial_power(-4)
    assert abs(xray_transform(f, Frame(E[0], E[1]))) < 1e-13


def test_wrong_degree_rejected():
    with pytest.raises(ValueError, match="degree -2"):
        xray_transform(HomogeneousFunction.radial_power(-4), Frame(E[0], E[1]))


def test_chart_field_closed_form():
    phi = xray_chart_field(INV_SQ, QuadratureSpec(64))
    assert abs(phi(np.zeros((2, 2))) - 2 * np.pi) < 1e-12
    rng = np.random.default_rng(0)
    for _ in range(20):
        X = 0.5 * rng.normal(size=(2, 2))
        assert abs(phi(X) - gram_closed_form(plane_from_chart(X))) < 1e-10


def test_chart_field_of_zero():
    phi = xray_chart_field(HomogeneousFunction.zero())
    assert phi(np.array([[0.3, -0.2], [0.1, 0.5]])) == 0.0


def test_quadrature_spectral_convergence():
    frame = Frame(2 * E[0], 3 * E[1])
    exact = gram_closed_form(frame)
    e16 = abs(xray_transform(INV_SQ, frame, QuadratureSpec(16)) - exact)
    e32 = abs(xray_transform(INV_SQ, frame, QuadratureSpec(32)) - exact)
    assert e16 / max(e32, 1e-300) >= 1e3


def test_linearity_exact():
    f = basis_to_degree_minus_2(harmonic_basis(2)[1])
    g = basis_to_degree_minus_2(harmonic_basis(2)[6])
    frame = Frame([1.0, 0.1, 0.3, 0], [0, 1.0, -0.2, 0.4])
    lhs = xray_transform(2.0 * f + (-3.0) * g, frame)
    rhs = 2.0 * xray_transform(f, frame) - 3.0 * xray_transform(g, frame)
    assert abs(lhs - rhs) < 1e-12 * (1 + abs(rhs))


def test_weight_law_on_transform():
    # |det g|^-1 covariance, the weight -1 law, at quadrature accuracy
    rng = np.random.default_rng(1)
    f = basis_to_degree_minus_2(harmonic_basis(2)[0])
    q = QuadratureSpec(128)
    frame = sample_frames(1, 7)[0]
    base = xray_transform(f, frame, q)
    for _ in range(10):
        g = np.array([[1.2, 0.3], [-0.4, 0.9]]) + 0.2 * rng.normal(size=(2, 2))
        moved = xray_transform(f, frame.transform(g), q)
        assert abs(moved - base / abs(np.linalg.det(g))) <= 1e-9 * (1 + abs(base))


# ---- quadrature plumbing ----------------------------------------------------

def test_quadrature_spec_validation():
    with pytest.raises(ValueError, match="4 nodes"):
        QuadratureSpec(3)


def test_circle_points_shape_and_values():
    q = QuadratureSpec(4)
    pts = circle_points(Frame(E[0], E[1]), q)
    assert pts.shape == (4, 4)
    assert_allclose(pts[0], E[0], atol=1e-15)
    assert_allclose(pts[1], E[1], atol=1e-15)


def test_circle_integral_constant():
    q = QuadratureSpec(64)
    assert_allclose(circle_integral(np.ones(64), q), 2 * np.pi, rtol=1e-15)
    with pytest.raises(ValueError, match="match"):
        circle_integral(np.ones(32), q)


# ---- moments ------------------------------------------------------------------

def test_moments_helicity_one():
    f = (HomogeneousFunction.from_poly(Poly4.monomial((1, 0, 0, 0)))
         * HomogeneousFunction.radial_power(-4))
    phi = xray_moments(f, Frame(E[0], E[1]), 1)
    assert_allclose(phi, [np.pi, 0.0], atol=1e-13)


def test_moments_helicity_two():
    f = (HomogeneousFunction.from_poly(Poly4.monomial((2, 0, 0, 0)))
         * HomogeneousFunction.radial_power(-6))
    phi = xray_moments(f, Frame(E[0], E[1]), 2)
    assert_allclose(phi, [3 * np.pi / 4, 0.0, np.pi / 4], atol=1e-13)


def test_moments_zero_function():
    f = HomogeneousFunction.zero(degree=-3)
    assert_allclose(xray_moments(f, Frame(E[0], E[1]), 1), [0.0, 0.0])


def test_moments_degree_mismatch():
    with pytest.raises(ValueError, match="degree"):
        xray_moments(INV_SQ, Frame(E[0], E[1]), 1)


def test_moments_parity_mismatch():
    # x1 |x|^-5 is odd under x -> -x; declaring it degree -4 passes the
    # degree gate for n = 2 but must trip the parity probe
    odd = HomogeneousFunction(
        -4,
        lambda x: x[..., 0] * np.einsum("...i,...i->...", x, x) ** -2.5,
        lambda x: np.zeros(x.shape))
    with pytest.raises(ValueError, match="parity"):
        xray_moments(odd, Frame(E[0], E[1]), 2)


def test_moments_reduce_to_transform_at_zero():
    frame = Frame([1.0, 0.2, -0.3, 0.1], [0.0, 1.0, 0.4, -0.2])
    assert_allclose(xray_moments(INV_SQ, frame, 0),
                    [xray_transform(INV_SQ, frame)], rtol=1e-15)


def test_moment_chart_field_components():
    f = (HomogeneousFunction.from_poly(Poly4.monomial((1, 0, 0, 0)))
         * HomogeneousFunction.radial_power(-4))
    m = moment_chart_field(f, 1)
    assert isinstance(m, MomentField)
    assert m.n == 1 and len(m.components) == 2
    assert_allclose([m.components[0](np.zeros((2, 2))),
                     m.components[1](np.zeros((2, 2)))], [np.pi, 0.0], atol=1e-13)


# ---- equivariance ---------------------------------------------------------------

def test_equivariance_identity_exact():
    frames = sample_frames(5, 11)
    assert equivariance_residual(INV_SQ, np.eye(4), frames) == 0.0


def test_equivariance_diagonal_and_rotation():
    frames = sample_frames(20, 12)
    g = np.diag([2.0, 0.5, 1.0, 1.0])
    assert equivariance_residual(INV_SQ, g, frames) < 1e-10
    c, s = np.cos(np.pi / 6), np.sin(np.pi / 6)
    rot = np.eye(4)
    rot[:2, :2] = [[c, -s], [s, c]]
    assert equivariance_residual(INV_SQ, rot, frames) < 1e-10


def test_equivariance_seeded_sl4_basis():
    rng = np.random.default_rng(13)
    frames = sample_frames(20, 14)
    inputs = [basis_to_degree_minus_2(h) for k in (0, 2)
              for h in harmonic_basis(k)]
    for _ in range(10):
        g = random_sl4(rng)
        assert abs(np.linalg.det(g) - 1.0) < 1e-10
        for f in inputs[:4]:
            assert equivariance_residual(f, g, frames) <= 1e-9


def test_equivariance_rejects_singular():
    with pytest.raises(ValueError, match="invertible"):
        equivariance_residual(INV_SQ, np.zeros((4, 4)), [Frame(E[0], E[1])])
