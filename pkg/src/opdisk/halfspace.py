"""
Half-space model
================

Points are ``zeta = x + iy`` with ``x`` Hermitian and ``y`` positive
invertible.  The Cayley-type map ``Gamma(h) = (1 + ih)(1 - ih)^{-1}`` carries
the half-space onto the disk, and the unitary ``U = [[1, 1], [i, -i]] / sqrt 2``
carries the form ``theta`` to ``theta_H(x, y) = -i(x1* y2 - x2* y1)``.

On the positive cone the Liouville form is ``alpha(v) = tau(y^-1 x y^-1 ydot)``
where ``ydot`` is the imaginary part of the tangent ``v``; its exterior
derivative has the closed form returned by :func:`d_liouville`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    Algebra,
    AlgebraElement,
    Valuation,
    fun_calc,
    is_positive,
    op_norm,
    sample,
    valuate,
)
from .doubled import DoubledMatrix, DoubledVector
from .errors import (
    BasePointMismatch,
    NotInDisk,
    NotInHalfSpace,
    NotOnSphere,
    NotPositive,
    StepOutOfHalfSpace,
)

SPHERE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class HalfSpacePoint:
    x: AlgebraElement
    y: AlgebraElement

    def __post_init__(self):
        for name, a in (("x", self.x), ("y", self.y)):
            if op_norm(a - a.adj) > 1e-10 * max(1.0, op_norm(a)):
                raise NotInHalfSpace(f"{name} is not Hermitian")
        w = np.linalg.eigvalsh(self.y.hermitian_part().rep)
        if w.min() <= 1e-12 * max(1.0, w.max()):
            raise NotInHalfSpace(f"imaginary part has min eigenvalue {w.min():.3e}")

    @classmethod
    def from_zeta(cls, zeta: AlgebraElement) -> "HalfSpacePoint":
        return cls(zeta.hermitian_part(), zeta.imaginary_part())

    @property
    def algebra(self) -> Algebra:
        return self.x.algebra

    @property
    def zeta(self) -> AlgebraElement:
        return self.x + self.y * 1j

    def same_as(self, other: "HalfSpacePoint", tol: float = 1e-12) -> bool:
        return self is other or op_norm(self.zeta - other.zeta) <= tol * max(1.0, op_norm(self.zeta))


@dataclass(frozen=True, eq=False)
class HalfTangent:
    """Tangent v = xdot + i ydot at a half-space point; any algebra element."""

    at: HalfSpacePoint
    v: AlgebraElement

    @property
    def xdot(self) -> AlgebraElement:
        return self.v.hermitian_part()

    @property
    def ydot(self) -> AlgebraElement:
        return self.v.imaginary_part()


def _same_point(v: HalfTangent, w: HalfTangent) -> None:
    if not v.at.same_as(w.at):
        raise BasePointMismatch("tangents sit at different half-space points")


# -- Moebius maps ---------------------------------------------------------------------


def mobius_to_disk(h: HalfSpacePoint) -> AlgebraElement:
    """Gamma(h) = (1 + ih)(1 - ih)^{-1}."""
    ih = h.zeta * 1j
    z = (1 + ih) @ (1 - ih).inv()
    if op_norm(z) >= 1:
        raise NotInDisk(f"image has norm {op_norm(z):.6g}")
    return z


def mobius_to_halfspace(z: AlgebraElement) -> HalfSpacePoint:
    """Gamma^{-1}(z) = i(1 - z)(1 + z)^{-1}."""
    if op_norm(z) >= 1:
        raise NotInDisk(f"||z|| = {op_norm(z):.6g} >= 1")
    return HalfSpacePoint.from_zeta(((1 - z) @ (1 + z).inv()) * 1j)


def mobius_derivative(h: HalfSpacePoint, v: AlgebraElement) -> AlgebraElement:
    """d Gamma at h applied to v: i (1 + Gamma(h)) v (1 - ih)^{-1}."""
    z = mobius_to_disk(h)
    return ((1 + z) @ v @ (1 - h.zeta * 1j).inv()) * 1j


# -- the form theta_H -----------------------------------------------------------------------


def theta_h(x: DoubledVector, y: DoubledVector) -> AlgebraElement:
    """-i (x1* y2 - x2* y1)."""
    return (x.x1.adj @ y.x2 - x.x2.adj @ y.x1) * (-1j)


def rho_h(algebra: Algebra) -> DoubledMatrix:
    one, zero = algebra.identity(), algebra.zero()
    return DoubledMatrix.from_blocks(zero, one * (-1j), one * 1j, zero)


def cayley_unitary(algebra: Algebra) -> DoubledMatrix:
    """U = [[1, 1], [i, -i]] / sqrt 2, with U* rho_H U = rho."""
    one = algebra.identity()
    return DoubledMatrix.from_blocks(one, one, one * 1j, one * (-1j)) * (1 / np.sqrt(2))


def to_halfspace_vector(x: DoubledVector) -> DoubledVector:
    """U x; carries theta to theta_H."""
    return cayley_unitary(x.algebra) @ x


def from_halfspace_vector(x: DoubledVector) -> DoubledVector:
    return cayley_unitary(x.algebra).adj @ x


def on_sphere_h(x: DoubledVector, tol: float = SPHERE_TOL) -> bool:
    """theta_H(x, x) = 1 and x1 invertible."""
    s = x.algebra.size
    scale = max(1.0, x.norm()) ** 2
    if op_norm(theta_h(x, x) - 1) > tol * scale:
        return False
    sv = np.linalg.svd(x.rep[:s], compute_uv=False)
    return bool(sv.min() > 1e-8 * sv.max())


def x_perp(x: DoubledVector) -> DoubledVector:
    """(i x1, (x1*)^{-1} + i x2): theta_H-orthogonal to x with theta_H(., .) = -1."""
    if not on_sphere_h(x):
        raise NotOnSphere("x is not on the half-space sphere")
    x1, x2 = x.x1, x.x2
    return DoubledVector.from_components(x1 * 1j, x1.adj.inv() + x2 * 1j)


def halfspace_section(zeta: HalfSpacePoint) -> DoubledVector:
    """(1, zeta) (2y)^{-1/2}."""
    c = fun_calc(zeta.y * 2, "inv_sqrt")
    return DoubledVector.from_components(c, zeta.zeta @ c)


def halfspace_projection(x: DoubledVector) -> DoubledMatrix:
    """Idempotent x theta_H(x, .) as a doubled matrix."""
    return DoubledMatrix(x.algebra, x.rep @ x.rep.conj().T @ rho_h(x.algebra).rep)


def halfspace_lift(zeta: HalfSpacePoint, v: HalfTangent) -> DoubledVector:
    """((2y)^{-1}, zeta (2y)^{-1} - i) i v (2y)^{-1/2}."""
    y2 = zeta.y * 2
    inv = fun_calc(y2, "inverse")
    tail = (v.v * 1j) @ fun_calc(y2, "inv_sqrt")
    col = DoubledVector.from_components(inv, zeta.zeta @ inv - 1j)
    return col @ tail


# -- trace product and Liouville form -----------------------------------------------------


def trace_product(nu: Valuation, v: HalfTangent, w: HalfTangent) -> AlgebraElement:
    """-nu((2y)^{-1} v* (2y)^{-1} w)."""
    _same_point(v, w)
    inv = fun_calc(v.at.y * 2, "inverse")
    return -valuate(nu, inv @ v.v.adj @ inv @ w.v)


def translated(v: HalfTangent) -> AlgebraElement:
    """y^{-1/2} v y^{-1/2}."""
    r = fun_calc(v.at.y, "inv_sqrt")
    return r @ v.v @ r


def trace_product_split(nu: Valuation, v: HalfTangent, w: HalfTangent) -> tuple[AlgebraElement, AlgebraElement]:
    """Real and imaginary parts of the trace product from translated variables.

    With V = xi1 + i eta1 and W = xi2 + i eta2 the translated tangents, the
    real part is -nu(xi1 xi2 + eta1 eta2)/4 and the imaginary part
    -nu(xi1 eta2 - eta1 xi2)/4.
    """
    _same_point(v, w)
    V, W = translated(v), translated(w)
    x1, e1 = V.hermitian_part(), V.imaginary_part()
    x2, e2 = W.hermitian_part(), W.imaginary_part()
    re = valuate(nu, x1 @ x2 + e1 @ e2) * (-0.25)
    im = valuate(nu, x1 @ e2 - e1 @ x2) * (-0.25)
    return re, im


def liouville(nu: Valuation, zeta: HalfSpacePoint, v: HalfTangent) -> AlgebraElement:
    """alpha(v) = nu(y^{-1} x y^{-1} ydot)."""
    yi = fun_calc(zeta.y, "inverse")
    return valuate(nu, yi @ zeta.x @ yi @ v.ydot)


def d_liouville(nu: Valuation, zeta: HalfSpacePoint, v: HalfTangent, w: HalfTangent) -> AlgebraElement:
    """Closed form nu(y^-1 xdot y^-1 ydot' - y^-1 xdot' y^-1 ydot)."""
    yi = fun_calc(zeta.y, "inverse")
    return valuate(nu, yi @ v.xdot @ yi @ w.ydot - yi @ w.xdot @ yi @ v.ydot)


def _shifted(zeta: HalfSpacePoint, v: AlgebraElement, t: float) -> HalfSpacePoint:
    try:
        return HalfSpacePoint.from_zeta(zeta.zeta + v * t)
    except NotInHalfSpace as exc:
        raise StepOutOfHalfSpace(f"step {t:g} leaves the half-space") from exc


def d_liouville_fd(nu: Valuation, zeta: HalfSpacePoint, v: HalfTangent, w: HalfTangent,
                   h: float = 1e-4) -> tuple[AlgebraElement, AlgebraElement]:
    """(closed form, finite-difference value) of d alpha(v, w).

    The finite difference runs along the affine family zeta + t v + s w, where
    the coordinate fields commute, so d alpha(v, w) = d_t alpha(w) - d_s alpha(v).
    """
    _same_point(v, w)

    def directional(a: HalfTangent, b: HalfTangent, k: float) -> np.ndarray:
        plus = liouville(nu, _shifted(zeta, a.v, k), b)
        minus = liouville(nu, _shifted(zeta, a.v, -k), b)
        return (plus - minus).rep / (2 * k)

    def diff(k):
        return directional(v, w, k) - directional(w, v, k)

    fd = (4 * diff(h / 2) - diff(h)) / 3
    return d_liouville(nu, zeta, v, w), AlgebraElement(nu.target, fd)


# -- positive cone ------------------------------------------------------------------------------


def spd_bracket(nu: Valuation, y: AlgebraElement, x1: AlgebraElement, x2: AlgebraElement) -> AlgebraElement:
    """[x1, x2]_y = nu(y^{-1} x1 y^{-1} x2)."""
    if not is_positive(y) or min(np.linalg.eigvalsh(y.hermitian_part().rep)) <= 0:
        raise NotPositive("y must be positive invertible")
    yi = fun_calc(y, "inverse")
    return valuate(nu, yi @ x1 @ yi @ x2)


def spd_action(g: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """g . y = (g^{-1})* y g^{-1}; tangents transform by the same rule."""
    gi = g.inv()
    return gi.adj @ y @ gi


# -- samplers ---------------------------------------------------------------------------------


def sample_halfspace(algebra: Algebra, seed) -> HalfSpacePoint:
    rng = np.random.default_rng(seed)
    return HalfSpacePoint(sample(algebra, rng, "hermitian"), sample(algebra, rng, "positive"))


def sample_half_tangent(zeta: HalfSpacePoint, seed) -> HalfTangent:
    """Random tangent whose imaginary part is small against y (||ydot|| <= y_min / 10)."""
    rng = np.random.default_rng(seed)
    xd = sample(zeta.algebra, rng, "hermitian")
    yd = sample(zeta.algebra, rng, "hermitian")
    ymin = float(np.linalg.eigvalsh(zeta.y.rep).min())
    nrm = op_norm(yd)
    if nrm > 0:
        yd = yd * (ymin / (10 * nrm))
    return HalfTangent(zeta, xd + yd * 1j)
