"""Tautological and coefficient bundles over Q_rho.

An endomorphism of the fiber ``R(p_x)`` is stored as a pair ``(x, a)`` and
acts by ``x b -> x (a b)``.  Changing the basis to ``x u`` changes the matrix
to ``u* a u``; :meth:`FiberEndomorphism.canonical_form` picks the basis
``sr(q)`` so that equivalent pairs compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .algebra import AlgebraElement, op_norm
from .doubled import DoubledVector, LieElement, theta
from .disk_space import (
    ProjectionPoint,
    SpherePoint,
    TangentVector,
    fiber_unitary,
    horizontal_generator,
    proj_from_sphere,
    same_base,
    tangent_from_lift,
)
from .errors import AlgebraMismatch, NotInRange

RANGE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class FiberEndomorphism:
    basis: SpherePoint
    matrix: AlgebraElement

    def __post_init__(self):
        if self.matrix.algebra != self.basis.algebra:
            raise AlgebraMismatch("matrix and basis live over different algebras")

    @property
    def algebra(self):
        return self.matrix.algebra

    @property
    def point(self) -> ProjectionPoint:
        return proj_from_sphere(self.basis)

    def in_basis(self, y: SpherePoint) -> "FiberEndomorphism":
        """The same endomorphism written in the basis y."""
        u = fiber_unitary(self.basis, y)
        return FiberEndomorphism(y, u.adj @ self.matrix @ u)

    def canonical_form(self) -> "FiberEndomorphism":
        return canonical_form(self)

    def _aligned(self, other: "FiberEndomorphism") -> AlgebraElement:
        if other.basis is self.basis:
            return other.matrix
        return other.in_basis(self.basis).matrix

    def __add__(self, other: "FiberEndomorphism") -> "FiberEndomorphism":
        return FiberEndomorphism(self.basis, self.matrix + self._aligned(other))

    def __sub__(self, other: "FiberEndomorphism") -> "FiberEndomorphism":
        return FiberEndomorphism(self.basis, self.matrix - self._aligned(other))

    def __mul__(self, c):
        return FiberEndomorphism(self.basis, self.matrix * c)

    __rmul__ = __mul__

    def __matmul__(self, other: "FiberEndomorphism") -> "FiberEndomorphism":
        """Composition of endomorphisms of the same fiber."""
        return FiberEndomorphism(self.basis, self.matrix @ self._aligned(other))

    @property
    def adj(self) -> "FiberEndomorphism":
        return FiberEndomorphism(self.basis, self.matrix.adj)

    def dist(self, other: "FiberEndomorphism") -> float:
        """Operator-norm distance, basis independent."""
        return op_norm(self.matrix - self._aligned(other))


def canonical_form(phi: FiberEndomorphism) -> FiberEndomorphism:
    """Rewrite phi in the basis sr(p_x)."""
    target = phi.point.sr
    u = theta(phi.basis.x, target.x)
    return FiberEndomorphism(target, u.adj @ phi.matrix @ u)


def endo_apply(phi: FiberEndomorphism, v: DoubledVector, tol: float = RANGE_TOL) -> DoubledVector:
    x = phi.basis.x
    coeff = theta(x, v)
    resid = v - x @ coeff
    if resid.norm() > tol * max(1.0, v.norm()) * max(1.0, x.norm()) ** 2:
        raise NotInRange(f"vector leaves the fiber by {resid.norm():.3e}")
    return x @ (phi.matrix @ coeff)


def endo_norm(phi: FiberEndomorphism) -> float:
    return op_norm(phi.matrix)


def identity_endomorphism(x: SpherePoint) -> FiberEndomorphism:
    return FiberEndomorphism(x, x.algebra.identity())


# -- curves -------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlgebraPolynomial:
    """t -> sum_k c_k t^k with algebra coefficients."""

    coeffs: tuple[AlgebraElement, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def constant(cls, c: AlgebraElement) -> "AlgebraPolynomial":
        return cls((c,))

    def __call__(self, t: float) -> AlgebraElement:
        out = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            out = out * t + c
        return out

    def derivative(self) -> "AlgebraPolynomial":
        if len(self.coeffs) == 1:
            return AlgebraPolynomial((self.coeffs[0].algebra.zero(),))
        return AlgebraPolynomial(tuple(c * k for k, c in enumerate(self.coeffs) if k > 0))


@dataclass(frozen=True, eq=False)
class CurveData:
    """Orbit curve x(t) = exp(t a) x0 carrying a polynomial coefficient a(t)."""

    generator: LieElement
    base_x: SpherePoint
    coefficient: AlgebraPolynomial

    @property
    def algebra(self):
        return self.base_x.algebra

    @property
    def base_q(self) -> ProjectionPoint:
        return proj_from_sphere(self.base_x)

    def x_rep(self, t: float) -> np.ndarray:
        return expm(t * self.generator.rep) @ self.base_x.rep

    def x(self, t: float) -> SpherePoint:
        return SpherePoint(DoubledVector(self.algebra, self.x_rep(t)))

    def xdot(self, t: float) -> DoubledVector:
        return DoubledVector(self.algebra, self.generator.rep @ self.x_rep(t))

    def q(self, t: float) -> ProjectionPoint:
        return proj_from_sphere(self.x(t))

    def section(self, t: float) -> DoubledVector:
        """sigma(t) = x(t) a(t)."""
        return DoubledVector(self.algebra, self.x_rep(t) @ self.coefficient(t).rep)

    def endomorphism(self, t: float) -> FiberEndomorphism:
        return FiberEndomorphism(self.x(t), self.coefficient(t))


def orbit_curve(X: TangentVector, coefficient: AlgebraPolynomial,
                x: SpherePoint | None = None) -> CurveData:
    """Curve through the base of X with initial velocity X."""
    return CurveData(horizontal_generator(X), X.base.sr if x is None else x, coefficient)


def _connection_term(curve: CurveData, t0: float) -> tuple[SpherePoint, AlgebraElement]:
    x = curve.x(t0)
    return x, theta(x.x, curve.xdot(t0))


def taut_derivative(curve: CurveData, t0: float = 0.0) -> DoubledVector:
    """x (a' + theta(x, x') a) at t0."""
    x, conn = _connection_term(curve, t0)
    a = curve.coefficient(t0)
    adot = curve.coefficient.derivative()(t0)
    return x.x @ (adot + conn @ a)


def _richardson(diff, h: float):
    return (4 * diff(h / 2) - diff(h)) / 3


def fd_covariant(sigma, q_rep: np.ndarray, t0: float, h: float = 1e-4) -> np.ndarray:
    """q(t0) times a Richardson-refined central difference of sigma at t0."""
    def diff(k):
        return (sigma(t0 + k) - sigma(t0 - k)) / (2 * k)
    return q_rep @ _richardson(diff, h)


def taut_derivative_fd(curve: CurveData, t0: float = 0.0, h: float = 1e-4) -> DoubledVector:
    """Finite-difference oracle for :func:`taut_derivative`."""
    rep = fd_covariant(lambda t: curve.section(t).rep, curve.q(t0).rep, t0, h)
    return DoubledVector(curve.algebra, rep)


def coeff_derivative(curve: CurveData, t0: float = 0.0) -> FiberEndomorphism:
    """Covariant derivative of the endomorphism field (x(t), lambda(t))."""
    x, conn = _connection_term(curve, t0)
    lam = curve.coefficient(t0)
    ldot = curve.coefficient.derivative()(t0)
    return FiberEndomorphism(x, ldot + conn.commutator(lam))


def leibniz_defect(curve: CurveData, sigma: AlgebraPolynomial, t0: float = 0.0,
                   h: float = 1e-4) -> float:
    """|| D(phi sigma) - phi(D sigma) - (D phi) sigma || with finite-difference D.

    ``curve.coefficient`` is the endomorphism field phi, ``sigma`` the
    coefficient of the section x(t) sigma(t).
    """
    q0 = curve.q(t0).rep
    x0 = curve.x(t0)
    lam0 = curve.coefficient(t0)

    def phi_sigma(t):
        return curve.x_rep(t) @ curve.coefficient(t).rep @ sigma(t).rep

    def plain_sigma(t):
        return curve.x_rep(t) @ sigma(t).rep

    lhs = fd_covariant(phi_sigma, q0, t0, h)
    d_sigma = DoubledVector(curve.algebra, fd_covariant(plain_sigma, q0, t0, h))
    phi_d_sigma = endo_apply(FiberEndomorphism(x0, lam0), d_sigma)
    d_phi = coeff_derivative(curve, t0)
    rhs = endo_apply(d_phi, DoubledVector(curve.algebra, plain_sigma(t0)))
    return float(np.linalg.norm(lhs - phi_d_sigma.rep - rhs.rep, 2))


# -- curvature ------------------------------------------------------------------------


def curvature(X: TangentVector, Y: TangentVector, x: SpherePoint | None = None) -> FiberEndomorphism:
    """R(X, Y) = (x, theta(x, [X, Y] x)), by default in the basis sr(q)."""
    same_base(X, Y)
    x = X.base.sr if x is None else x
    xr = x.rep
    xy = X.rep @ Y.rep - Y.rep @ X.rep
    return FiberEndomorphism(x, theta(x.x, DoubledVector(x.algebra, xy @ xr)))


def curvature_fd_oracle(X: TangentVector, Y: TangentVector,
                        sigma0: AlgebraElement | None = None,
                        h: float = 1e-4) -> FiberEndomorphism:
    """D_X D_Y sigma - D_Y D_X sigma by nested central differences.

    The two-parameter family is x(t, s) = exp(t a) exp(s b) x0 with a, b the
    horizontal generators of X and Y, and sigma(t, s) = x(t, s) sigma0.
    ``sigma0`` must be invertible; it defaults to the identity.
    """
    same_base(X, Y)
    alg = X.algebra
    x0 = X.base.sr
    s0 = alg.identity() if sigma0 is None else sigma0
    A = horizontal_generator(X).rep
    B = horizontal_generator(Y).rep
    r = np.r_[np.ones(alg.size), -np.ones(alg.size)][None, :]

    def xts(t, s):
        return expm(t * A) @ expm(s * B) @ x0.rep

    def q_of(xr):
        return xr @ xr.conj().T * r

    def sigma(t, s):
        return xts(t, s) @ s0.rep

    q0 = q_of(x0.rep)

    def commutator_at(k):
        def d_y(t):  # D_Y sigma along the s-direction at (t, 0)
            return q_of(xts(t, 0.0)) @ (sigma(t, k) - sigma(t, -k)) / (2 * k)

        def d_x(s):
            return q_of(xts(0.0, s)) @ (sigma(k, s) - sigma(-k, s)) / (2 * k)

        dxdy = q0 @ (d_y(k) - d_y(-k)) / (2 * k)
        dydx = q0 @ (d_x(k) - d_x(-k)) / (2 * k)
        return dxdy - dydx

    w = DoubledVector(alg, _richardson(commutator_at, h))
    coeff = theta(x0.x, w)
    return FiberEndomorphism(x0, coeff @ s0.inv())


# -- module structure of the tangent space ------------------------------------------------


def tangent_times(Y: TangentVector, phi: FiberEndomorphism) -> TangentVector:
    """Right action of the coefficient fiber on tangents: lift, multiply, push down."""
    x = phi.basis
    v = Y.rep @ x.rep @ phi.matrix.rep
    return tangent_from_lift(x, DoubledVector(Y.algebra, v))
