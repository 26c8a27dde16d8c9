"""Moment map of the U(theta) action and the restricted convexity experiment."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .algebra import AlgebraElement, Valuation, fun_calc, is_positive, op_norm, valuate
from .bundles import FiberEndomorphism
from .doubled import DoubledMatrix, DoubledVector, GroupElement, LieElement, theta
from .disk_space import (
    ProjectionPoint,
    SpherePoint,
    TangentVector,
    act,
    act_sphere,
    disk_coords,
    disk_point,
    horizontal_generator,
)
from .errors import InvalidPoint, NotRepresentable
from .kahler import symplectic_form

IMAGE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MomentValue:
    value: FiberEndomorphism

    @property
    def matrix(self) -> AlgebraElement:
        return self.value.matrix


def inf_action(a: LieElement, q: ProjectionPoint) -> TangentVector:
    """X_a(q) = a q - q a."""
    ar = a.rep
    return TangentVector(q, DoubledMatrix(q.algebra, ar @ q.rep - q.rep @ ar))


def _moment_matrix(a: LieElement, x: SpherePoint) -> AlgebraElement:
    return theta(x.x, DoubledVector(x.algebra, a.rep @ x.rep)) * (1 / 2j)


def moment_map(a: LieElement, q: ProjectionPoint, x: SpherePoint | None = None) -> MomentValue:
    """f_a(q) = (1/2i) theta(x, a x), in the basis x (default sr(q))."""
    x = q.sr if x is None else x
    return MomentValue(FiberEndomorphism(x, _moment_matrix(a, x)))


def conjugate_lie(m: GroupElement, a: LieElement) -> LieElement:
    return LieElement.from_matrix(DoubledMatrix(a.algebra, m.rep @ a.rep @ np.linalg.inv(m.rep)))


def moment_equivariance_defect(m: GroupElement, a: LieElement, q: ProjectionPoint) -> float:
    """Distance between f_{m a m^-1}(m q m^-1) and f_a(q) transported by m."""
    x = q.sr
    moved = moment_map(conjugate_lie(m, a), act(m, q)).value
    transported = FiberEndomorphism(act_sphere(m, x), moment_map(a, q, x).matrix)
    return moved.dist(transported)


def moment_gradient_check(a: LieElement, Y: TangentVector,
                          h: float = 1e-4) -> tuple[FiberEndomorphism, FiberEndomorphism]:
    """(D_Y f_a, omega(X_a, Y)); the first by finite differences along the orbit of Y."""
    q = Y.base
    x0 = q.sr
    alg = q.algebra
    b = horizontal_generator(Y).rep

    def coeff(t):
        xt = SpherePoint(DoubledVector(alg, expm(t * b) @ x0.rep))
        return _moment_matrix(a, xt).rep

    def diff(k):
        return (coeff(k) - coeff(-k)) / (2 * k)

    ldot = AlgebraElement(alg, alg.project((4 * diff(h / 2) - diff(h)) / 3))
    conn = theta(x0.x, DoubledVector(alg, b @ x0.rep))
    lam = _moment_matrix(a, x0)
    lhs = FiberEndomorphism(x0, ldot + conn.commutator(lam))
    rhs = symplectic_form(inf_action(a, q), Y, x0)
    return lhs, rhs


def _poisson_parts(a: LieElement, b: LieElement, q: ProjectionPoint):
    x = q.sr
    om = symplectic_form(inf_action(a, q), inf_action(b, q), x).matrix
    fab = _moment_matrix(a.bracket(b), x)
    fa, fb = _moment_matrix(a, x), _moment_matrix(b, x)
    return x, om, fab, fa.commutator(fb) * 2j


def poisson_defect(a: LieElement, b: LieElement, q: ProjectionPoint) -> FiberEndomorphism:
    """omega(X_a, X_b) + f_[a,b] - 2i [f_a, f_b]."""
    x, om, fab, comm = _poisson_parts(a, b, q)
    return FiberEndomorphism(x, om + fab - comm)


def poisson_identity_defect(a: LieElement, b: LieElement, q: ProjectionPoint) -> FiberEndomorphism:
    """omega(X_a, X_b) - f_[a,b] + 2i [f_a, f_b].

    This is the combination forced by the gradient identity
    D_Y f_a = omega(X_a, Y) evaluated at Y = X_b; it vanishes identically.
    """
    x, om, fab, comm = _poisson_parts(a, b, q)
    return FiberEndomorphism(x, om - fab + comm)


# -- valuations ------------------------------------------------------------------------


def tau_pairing(nu: Valuation, m: DoubledMatrix) -> AlgebraElement:
    """tau(m) = nu(m11 + m22) / 2."""
    return valuate(nu, m.m11 + m.m22) * 0.5


def valuated_moment(nu: Valuation, a: LieElement, q: ProjectionPoint) -> AlgebraElement:
    """nu applied to the moment matrix."""
    return valuate(nu, moment_map(a, q).matrix)


def tau_moment(nu: Valuation, a: LieElement, q: ProjectionPoint) -> AlgebraElement:
    """tau(q a), computed alongside :func:`valuated_moment` for comparison."""
    return tau_pairing(nu, q.q @ a.matrix)


# -- restricted action and convexity ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RestrictedImagePoint:
    c1: AlgebraElement
    c2: AlgebraElement
    tol: float = IMAGE_TOL

    def __post_init__(self):
        if op_norm(self.c1 - self.c1.adj) > self.tol * max(1.0, op_norm(self.c1)):
            raise InvalidPoint("c1 is not Hermitian")
        if not is_positive(self.c1) or op_norm(fun_calc(self.c1, "inverse")) > 1e12:
            raise InvalidPoint("c1 is not positive invertible")
        defect = op_norm(self.c1 + self.c2 - 1)
        if defect > self.tol * max(1.0, op_norm(self.c1)):
            raise InvalidPoint(f"c1 + c2 differs from 1 by {defect:.3e}")

    def dist(self, other: "RestrictedImagePoint") -> float:
        return max(op_norm(self.c1 - other.c1), op_norm(self.c2 - other.c2))

    def functional(self, nu: Valuation, a: LieElement) -> AlgebraElement:
        """(a1, a2) -> nu(c1 a1 + c2 a2) on the diagonal part of a."""
        return valuate(nu, self.c1 @ a.a11 + self.c2 @ a.a22)


def restricted_image(q: ProjectionPoint) -> RestrictedImagePoint:
    """c1 = (1 - zz*)^{-1}, c2 = -(1 - zz*)^{-1} zz* for z the disk coordinate of q."""
    z = disk_coords(q)
    zz = z @ z.adj
    c1 = fun_calc(1 - zz, "inverse")
    c2 = -(c1 @ zz)
    # c1 and zz commute; symmetrize c2 against round-off
    return RestrictedImagePoint(c1, c2.hermitian_part())


def moment_diagonal(q: ProjectionPoint) -> tuple[AlgebraElement, AlgebraElement]:
    """The diagonal blocks (q11, q22) of q.

    For diagonal a the valuated moment is nu(q11 a1 + q22 a2) up to the
    factor 1/2i, and nu(q11) agrees with nu(c1) of :func:`restricted_image`.
    """
    return q.q.m11, q.q.m22


def convexity_witness(pA: RestrictedImagePoint, pB: RestrictedImagePoint,
                      t: float) -> tuple[AlgebraElement, RestrictedImagePoint]:
    """Realize the convex combination t pA + (1 - t) pB as an image point.

    Returns the Hermitian disk coordinate z = (1 - c1^{-1})^{1/2} and the
    image point re-derived from disk_point(z).
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    c1 = pA.c1 * t + pB.c1 * (1 - t)
    target = 1 - fun_calc(c1.hermitian_part(), "inverse")
    if not is_positive(target):
        raise NotRepresentable("1 - c1^{-1} is not positive")
    z = fun_calc(target.hermitian_part(), "sqrt")
    if op_norm(z) >= 1:
        raise NotRepresentable("witness leaves the open disk")
    return z, restricted_image(disk_point(z))


def witness_defect(pA: RestrictedImagePoint, pB: RestrictedImagePoint, t: float) -> float:
    """Distance between the witness image and the requested convex combination."""
    _, check = convexity_witness(pA, pB, t)
    c1 = pA.c1 * t + pB.c1 * (1 - t)
    return max(op_norm(check.c1 - c1), op_norm(check.c2 - (1 - c1)))
