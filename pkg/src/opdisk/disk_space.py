"""The idempotent space Q_rho, the sphere K and the fibration between them.

Points of Q_rho are theta-symmetric idempotents ``q`` with ``rho(2q - 1) >= 0``.
The sphere ``K`` holds vectors with ``theta(x, x) = 1`` and invertible first
coordinate; ``p_x = x x* rho`` projects it onto Q_rho and ``sr(q) = lambda_q e1``
is a global section.  Tangent vectors at ``q`` are theta-symmetric ``X`` with
``Xq + qX = X``; their horizontal lift to ``x`` is ``Xx``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import Algebra, AlgebraElement, fun_calc, op_norm, sample
from .doubled import (
    DoubledMatrix,
    DoubledVector,
    GroupElement,
    LieElement,
    sharp_rep,
    theta,
)
from .errors import (
    BasePointMismatch,
    DegenerateProjection,
    DifferentFibers,
    InvalidPoint,
    NotHorizontal,
    NotInDisk,
    OpDiskError,
)

POINT_TOL = 1e-8
INVERTIBLE_TOL = 1e-8


def _scale(rep: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(rep, 2)))


def _rho(s: int) -> np.ndarray:
    return np.r_[np.ones(s), -np.ones(s)]


def projection_defects(rep: np.ndarray) -> dict[str, float]:
    """Relative defects of the three Q_rho conditions on a raw array."""
    n2 = rep.shape[0]
    sc = _scale(rep)
    g = 2 * rep - np.eye(n2)
    pos = _rho(n2 // 2)[:, None] * g
    herm = float(np.linalg.norm(pos - pos.conj().T, 2))
    eig = float(np.linalg.eigvalsh((pos + pos.conj().T) / 2).min())
    return {
        "idempotent": float(np.linalg.norm(rep @ rep - rep, 2)) / sc**2,
        "symmetric": float(np.linalg.norm(sharp_rep(rep) - rep, 2)) / sc,
        "positive": max(herm, -eig, 0.0) / sc,
    }


@dataclass(frozen=True, eq=False)
class ProjectionPoint:
    """A validated point of Q_rho."""

    q: DoubledMatrix
    tol: float = POINT_TOL

    def __post_init__(self):
        for name, val in projection_defects(self.q.rep).items():
            if val > self.tol:
                raise InvalidPoint(f"{name} defect {val:.3e} exceeds {self.tol:.1e}")

    @classmethod
    def base(cls, algebra: Algebra) -> "ProjectionPoint":
        return cls(DoubledMatrix.p(algebra))

    @property
    def algebra(self) -> Algebra:
        return self.q.algebra

    @property
    def rep(self) -> np.ndarray:
        return self.q.rep

    @cached_property
    def lam(self) -> DoubledMatrix:
        return lambda_of_q(self)

    @cached_property
    def sr(self) -> "SpherePoint":
        return section_sr(self)

    def dist(self, other: "ProjectionPoint") -> float:
        return self.q.dist(other.q)


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """A validated point of the sphere K."""

    x: DoubledVector
    tol: float = POINT_TOL

    def __post_init__(self):
        s = self.x.algebra.size
        rep = self.x.rep
        defect = theta(self.x, self.x).rep - np.eye(s)
        err = float(np.linalg.norm(defect, 2)) / _scale(rep) ** 2
        if err > self.tol:
            raise InvalidPoint(f"theta(x, x) - 1 has norm {err:.3e}")
        sv = np.linalg.svd(rep[:s], compute_uv=False)
        if sv.min() < INVERTIBLE_TOL * max(sv.max(), 1e-300):
            raise InvalidPoint("first coordinate is not invertible")

    @property
    def algebra(self) -> Algebra:
        return self.x.algebra

    @property
    def rep(self) -> np.ndarray:
        return self.x.rep

    @property
    def x1(self) -> AlgebraElement:
        return self.x.x1

    @property
    def x2(self) -> AlgebraElement:
        return self.x.x2

    def __matmul__(self, u: AlgebraElement) -> "SpherePoint":
        """Right action of a unitary of the algebra."""
        return SpherePoint(self.x @ u)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A validated tangent vector ``X`` at ``base``."""

    base: ProjectionPoint
    X: DoubledMatrix
    tol: float = POINT_TOL

    def __post_init__(self):
        if self.X.algebra != self.base.algebra:
            raise InvalidPoint("tangent and base live over different algebras")
        x, q = self.X.rep, self.base.rep
        sc = _scale(x) * _scale(q)
        sym = float(np.linalg.norm(sharp_rep(x) - x, 2)) / sc
        tan = float(np.linalg.norm(x @ q + q @ x - x, 2)) / sc
        if max(sym, tan) > self.tol:
            raise InvalidPoint(f"tangent defects {sym:.3e}, {tan:.3e} exceed {self.tol:.1e}")

    @property
    def algebra(self) -> Algebra:
        return self.X.algebra

    @property
    def rep(self) -> np.ndarray:
        return self.X.rep

    def __add__(self, other: "TangentVector") -> "TangentVector":
        _same_base(self, other)
        return TangentVector(self.base, self.X + other.X)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        _same_base(self, other)
        return TangentVector(self.base, self.X - other.X)

    def __mul__(self, t):
        return TangentVector(self.base, self.X * float(t))

    __rmul__ = __mul__

    def lift(self, x: SpherePoint | None = None) -> DoubledVector:
        return lift_form(self, self.base.sr if x is None else x)


def _same_base(X: TangentVector, Y: TangentVector, tol: float = 1e-9) -> None:
    if X.base is Y.base:
        return
    if X.base.dist(Y.base) > tol * _scale(X.base.rep):
        raise BasePointMismatch("tangent vectors sit at different points")


def same_base(X: TangentVector, Y: TangentVector) -> None:
    """Raise :class:`BasePointMismatch` unless X and Y share a base point."""
    _same_base(X, Y)


# -- structure maps ---------------------------------------------------------------


def q_from_b(b: AlgebraElement) -> ProjectionPoint:
    """Parametrization of Q_rho by the algebra."""
    one = b.algebra.identity()
    bb = b.adj @ b
    root = fun_calc(one + bb, "sqrt")
    return ProjectionPoint(DoubledMatrix.from_blocks(
        one + bb, -(root @ b.adj), b @ root, -(b @ b.adj)))


def lambda_of_q(q: ProjectionPoint) -> DoubledMatrix:
    """lambda_q = |2q - 1|^{-1/2}, computed as (g g*)^{1/4}."""
    g = 2 * q.rep - np.eye(q.rep.shape[0])
    gg = g @ g.conj().T
    gg = (gg + gg.conj().T) / 2
    w, v = np.linalg.eigh(gg)
    if w.min() <= 0 or not np.all(np.isfinite(w)):
        raise DegenerateProjection("2q - 1 is not invertible")
    return DoubledMatrix(q.algebra, (v * w ** 0.25) @ v.conj().T)


def proj_from_sphere(x: SpherePoint) -> ProjectionPoint:
    """p_x = x x* rho."""
    s = x.algebra.size
    rep = x.rep @ x.rep.conj().T * _rho(s)[None, :]
    return ProjectionPoint(DoubledMatrix(x.algebra, rep))


def section_sr(q: ProjectionPoint) -> SpherePoint:
    s = q.algebra.size
    return SpherePoint(DoubledVector(q.algebra, q.lam.rep[:, :s]))


def _fiber_dist(x: SpherePoint, y: SpherePoint) -> float:
    s = x.algebra.size
    r = _rho(s)[None, :]
    px = x.rep @ x.rep.conj().T * r
    py = y.rep @ y.rep.conj().T * r
    return float(np.linalg.norm(px - py, 2)) / _scale(px)


def fiber_unitary(x: SpherePoint, y: SpherePoint, tol: float = 1e-8) -> AlgebraElement:
    """The unitary u with y = x u, for x and y in the same fiber."""
    if _fiber_dist(x, y) > tol:
        raise DifferentFibers("points project to different idempotents")
    return theta(x.x, y.x)


def lift_form(X: TangentVector, x: SpherePoint) -> DoubledVector:
    """kappa_x(X) = X x."""
    px = x.rep @ x.rep.conj().T * _rho(x.algebra.size)[None, :]
    if float(np.linalg.norm(px - X.base.rep, 2)) > 1e-8 * _scale(px):
        raise BasePointMismatch("x does not lie over the base point of X")
    return X.X @ x.x


def tangent_from_lift(x: SpherePoint, v: DoubledVector, tol: float = 1e-8) -> TangentVector:
    """Push a horizontal vector v at x down to the tangent v x* rho + x v* rho."""
    s = x.algebra.size
    r = _rho(s)[None, :]
    px_v = x.rep @ theta(x.x, v).rep
    if float(np.linalg.norm(px_v, 2)) > tol * _scale(x.rep) ** 2 * max(1.0, v.norm()):
        raise NotHorizontal("v is not annihilated by p_x")
    rep = (v.rep @ x.rep.conj().T + x.rep @ v.rep.conj().T) * r
    base = proj_from_sphere(x)
    return TangentVector(base, DoubledMatrix(x.algebra, rep))


def horizontal_generator(X: TangentVector) -> LieElement:
    """The Lie element Xq - qX, whose bracket with q returns X."""
    q = X.base.q
    return LieElement.from_matrix(X.X @ q - q @ X.X)


def act(m: GroupElement, q: ProjectionPoint) -> ProjectionPoint:
    rep = m.rep @ q.rep @ np.linalg.inv(m.rep)
    return ProjectionPoint(DoubledMatrix(q.algebra, rep))


def act_sphere(m: GroupElement, x: SpherePoint) -> SpherePoint:
    return SpherePoint(m.m @ x.x)


def act_tangent(m: GroupElement, X: TangentVector, q: ProjectionPoint | None = None) -> TangentVector:
    """Push X forward by m; the new base may be supplied to share objects."""
    mi = np.linalg.inv(m.rep)
    base = act(m, X.base) if q is None else q
    return TangentVector(base, DoubledMatrix(X.algebra, m.rep @ X.rep @ mi))


def basis_completion(x: SpherePoint) -> tuple[DoubledVector, DoubledVector]:
    """Orthonormal pair (y, z) with y spanning R(p_x) and z spanning N(p_x).

    ``y1`` and ``z2`` are positive and invertible.
    """
    x1, x2 = x.x1, x.x2
    y = x.x @ (x1.adj @ fun_calc(x1 @ x1.adj, "inv_sqrt"))
    root = fun_calc(x2 @ x2.adj + 1, "sqrt")
    z1 = x1.adj.inv() @ x2.adj @ root
    return y, DoubledVector.from_components(z1, root)


def disk_coords(q: ProjectionPoint) -> AlgebraElement:
    """z = x2 x1^{-1} for any x over q."""
    x = q.sr
    return x.x2 @ x.x1.inv()


def disk_section(z: AlgebraElement) -> SpherePoint:
    if op_norm(z) >= 1:
        raise NotInDisk(f"||z|| = {op_norm(z):.6g} >= 1")
    c = fun_calc(1 - z.adj @ z, "inv_sqrt")
    return SpherePoint(DoubledVector.from_components(c, z @ c))


def disk_point(z: AlgebraElement) -> ProjectionPoint:
    return proj_from_sphere(disk_section(z))


def disk_tangent(z: AlgebraElement, a: AlgebraElement) -> TangentVector:
    """Velocity of t -> disk_point(z + t a) at t = 0."""
    x = disk_section(z)
    c = x.x1
    v2 = fun_calc(1 - z @ z.adj, "inverse") @ a @ c
    v = DoubledVector.from_components(z.adj @ v2, v2)
    return tangent_from_lift(x, v)


def disk_velocity(X: TangentVector) -> AlgebraElement:
    """Inverse of :func:`disk_tangent`: the disk-coordinate velocity of X."""
    z = disk_coords(X.base)
    x = disk_section(z)
    v = X.X @ x.x
    return (v.x2 - z @ v.x1) @ x.x1.inv()


# -- samplers ----------------------------------------------------------------------


def sample_point(algebra: Algebra, seed, scale: float = 1.0) -> ProjectionPoint:
    """q_from_b of a random b with operator norm about ``scale``."""
    b = sample(algebra, seed)
    nrm = op_norm(b)
    return q_from_b(b * (scale / nrm) if nrm > 0 else b)


def sample_sphere(algebra: Algebra, seed, scale: float = 1.0) -> SpherePoint:
    """A random point of K, not necessarily in the canonical section."""
    rng = np.random.default_rng(seed)
    q = sample_point(algebra, rng, scale)
    return q.sr @ sample(algebra, rng, "unitary")


def tangent_projection(q: ProjectionPoint, V: DoubledMatrix) -> TangentVector:
    """Project a theta-symmetric V to the tangent space: Vq + qV - 2qVq."""
    qr, vr = q.rep, V.rep
    return TangentVector(q, DoubledMatrix(q.algebra, vr @ qr + qr @ vr - 2 * qr @ vr @ qr))


def sample_tangent(q: ProjectionPoint, seed, unit: bool = True) -> TangentVector:
    """Random tangent at q; normalized to unit Finsler length when ``unit``."""
    rng = np.random.default_rng(seed)
    alg = q.algebra
    M = DoubledMatrix.from_blocks(*(sample(alg, rng) for _ in range(4)))
    V = DoubledMatrix(alg, (M.rep + sharp_rep(M.rep)) / 2)
    X = tangent_projection(q, V)
    if not unit:
        return X
    lam = q.lam.rep
    nrm = float(np.linalg.norm(np.linalg.solve(lam, X.rep @ lam), 2))
    if nrm == 0:
        raise OpDiskError("sampled a zero tangent vector")
    return X * (1.0 / nrm)
