"""The circle X-ray transform and its helicity moments.

A homogeneous degree -2 function is integrated over the circle of lines
inside a 2-plane: given a frame (u, v), the raw integral over theta in
[0, 2pi) of f(u cos theta + v sin theta).  Uniform periodic trapezoid
nodes make the quadrature spectrally accurate for the analytic integrands
in scope.  No 1/(2pi) normalization is applied anywhere, so the flagship
closed form is exactly 2*pi/sqrt(det Gram).

As a function of the frame the transform is a weight -1 field
(|det g|**-1 under right GL(2) moves), and its chart restriction is
annihilated by the John operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fields import HomogeneousFunction, WeightedField
from .geometry import Frame, plane_from_chart
from .operators import ChartField

DEFAULT_NODES = 64


@dataclass(frozen=True)
class QuadratureSpec:
    """Uniform periodic trapezoid rule on [0, 2pi) with n_nodes >= 4."""

    n_nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if self.n_nodes < 4:
            raise ValueError("quadrature needs at least 4 nodes")

    def angles(self):
        return np.arange(self.n_nodes) * (2.0 * np.pi / self.n_nodes)


def circle_points(frame: Frame, q: QuadratureSpec):
    """Quadrature points u cos(theta_j) + v sin(theta_j), shape (n_nodes, 4)."""
    theta = q.angles()
    return np.outer(np.cos(theta), frame.u) + np.outer(np.sin(theta), frame.v)


def circle_integral(values, q: QuadratureSpec):
    """Periodic trapezoid sum of sampled values; shared by all transforms."""
    values = np.asarray(values)
    if values.shape[-1] != q.n_nodes:
        raise ValueError("value count does not match the quadrature spec")
    return values.sum(axis=-1) * (2.0 * np.pi / q.n_nodes)


def xray_transform(f: HomogeneousFunction, frame: Frame,
                   q: QuadratureSpec = QuadratureSpec()):
    """Integral of f over the circle of the frame; requires degree -2."""
    if f.degree != -2:
        raise ValueError(f"X-ray transform needs degree -2, got {f.degree}")
    return circle_integral(f(circle_points(frame, q)), q)


def xray_weighted_field(f: HomogeneousFunction,
                        q: QuadratureSpec = QuadratureSpec()) -> WeightedField:
    """The transform packaged as a weight -1 field on frames."""
    if f.degree != -2:
        raise ValueError(f"X-ray transform needs degree -2, got {f.degree}")
    return WeightedField(weight=-1, eval=lambda frame: xray_transform(f, frame, q))


def xray_chart_field(f: HomogeneousFunction,
                     q: QuadratureSpec = QuadratureSpec()) -> ChartField:
    """The transform restricted to the affine chart, as a ChartField.

    The result solves the John equation; see operators.john_operator.
    """
    if f.degree != -2:
        raise ValueError(f"X-ray transform needs degree -2, got {f.degree}")

    def phi(X):
        return xray_transform(f, plane_from_chart(X), q)

    return ChartField(phi)


_PARITY_PROBE = np.array([0.31, 0.67, -0.44, 0.52])


def xray_moments(f: HomogeneousFunction, frame: Frame, n,
                 q: QuadratureSpec = QuadratureSpec()):
    """Helicity moment vector (phi_0, ..., phi_n) of a degree -n-2 input.

    phi_k = integral over the circle of f * cos^(n-k) * sin^k.  The input
    must have parity (-1)^n under x -> -x (checked at a probe point);
    n = 0 reduces to the plain transform.
    """
    n = int(n)
    if n < 0:
        raise ValueError("helicity index must be nonnegative")
    if f.degree != -n - 2:
        raise ValueError(
            f"moments at helicity index {n} need degree {-n - 2}, got {f.degree}")
    plus = f(_PARITY_PROBE)
    minus = f(-_PARITY_PROBE)
    if abs(minus - (-1.0) ** n * plus) > 1e-9 * (1.0 + abs(plus)):
        raise ValueError(f"input does not have parity (-1)^{n} under x -> -x")
    theta = q.angles()
    c, s = np.cos(theta), np.sin(theta)
    vals = f(circle_points(frame, q))
    return np.array([circle_integral(vals * c ** (n - k) * s ** k, q)
                     for k in range(n + 1)])


@dataclass(frozen=True)
class MomentField:
    """Chart restriction of the moment vector: n+1 scalar chart functions."""

    n: int
    components: tuple


def moment_chart_field(f: HomogeneousFunction, n,
                       q: QuadratureSpec = QuadratureSpec()) -> MomentField:
    """Moments composed with plane_from_chart, one chart function per k."""

    def component(k):
        def phi(X):
            return xray_moments(f, plane_from_chart(X), n, q)[k]
        return phi

    return MomentField(n=int(n), components=tuple(component(k) for k in range(n + 1)))


def equivariance_residual(f: HomogeneousFunction, g, frames,
                          q: QuadratureSpec = QuadratureSpec()):
    """Max over frames of |R(f o g)(u, v) - (Rf)(g u, g v)|."""
    g = np.asarray(g, dtype=float)
    if g.shape != (4, 4) or np.linalg.det(g) == 0.0:
        raise ValueError("g must be an invertible 4x4 matrix")
    fg = f.compose_linear(g)
    worst = 0.0
    for frame in frames:
        lhs = xray_transform(fg, frame, q)
        rhs = xray_transform(f, frame.ambient_transform(g), q)
        worst = max(worst, abs(lhs - rhs))
    return worst


def random_gl2(rng, smin=0.5, smax=2.0):
    """A seeded random invertible 2x2 matrix with singular values in
    [smin, smax] and random determinant sign.

    Conditioning is bounded so that transformed frames stay within the
    spectrally-converged regime of the quadrature.
    """
    q1, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    q2, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    s = np.exp(rng.uniform(np.log(smin), np.log(smax), size=2))
    g = q1 @ np.diag(s) @ q2
    if rng.random() < 0.5:
        g = g[:, ::-1]
    return g


def random_sl4(rng, scale=0.35):
    """A seeded random element of SL(4, R).

    Gram-Schmidt a perturbed identity, perturb again, then normalize the
    determinant to +1.
    """
    a = np.eye(4) + scale * rng.normal(size=(4, 4))
    qmat, r = np.linalg.qr(a)
    qmat = qmat * np.sign(np.diag(r))
    m = qmat + 0.5 * scale * rng.normal(size=(4, 4))
    det = np.linalg.det(m)
    if abs(det) < 1e-3:
        return random_sl4(rng, scale)
    if det < 0:
        m = m[:, [1, 0, 2, 3]]
        det = -det
    return m / det ** 0.25
