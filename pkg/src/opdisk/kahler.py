"""Complex structure, Hilbertian product, symplectic form, Finsler norm, connection."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .algebra import AlgebraElement
from .bundles import FiberEndomorphism
from .doubled import DoubledMatrix, DoubledVector, theta
from .disk_space import (
    ProjectionPoint,
    SpherePoint,
    TangentVector,
    horizontal_generator,
    same_base,
)


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """Value of the Hilbertian product, split as real + i * imaginary."""

    value: FiberEndomorphism

    @property
    def matrix(self) -> AlgebraElement:
        return self.value.matrix

    @property
    def real(self) -> AlgebraElement:
        return self.value.matrix.hermitian_part()

    @property
    def imaginary(self) -> AlgebraElement:
        return self.value.matrix.imaginary_part()


def _im(phi: FiberEndomorphism) -> FiberEndomorphism:
    return FiberEndomorphism(phi.basis, phi.matrix.imaginary_part())


def complex_structure(X: TangentVector) -> TangentVector:
    """i_q X = i X (2q - 1)."""
    g = 2 * X.base.rep - np.eye(X.base.rep.shape[0])
    return TangentVector(X.base, DoubledMatrix(X.algebra, 1j * X.rep @ g))


def hilbertian_product(X: TangentVector, Y: TangentVector,
                       x: SpherePoint | None = None) -> HermitianForm:
    """<X, Y>_q = -theta(Xx, Yx), in the basis x (default sr(q))."""
    same_base(X, Y)
    x = X.base.sr if x is None else x
    alg = X.algebra
    c = theta(DoubledVector(alg, X.rep @ x.rep), DoubledVector(alg, Y.rep @ x.rep))
    return HermitianForm(FiberEndomorphism(x, -c))


def riemannian_form(X: TangentVector, Y: TangentVector) -> FiberEndomorphism:
    hp = hilbertian_product(X, Y).value
    return FiberEndomorphism(hp.basis, hp.matrix.hermitian_part())


def symplectic_form(X: TangentVector, Y: TangentVector,
                    x: SpherePoint | None = None) -> FiberEndomorphism:
    """Imaginary part (c - c*)/2i of the Hilbertian product."""
    return _im(hilbertian_product(X, Y, x).value)


def finsler_norm(X: TangentVector) -> float:
    """||lambda_q^{-1} X lambda_q||; equals ||X|| at q = p and is U(theta)-invariant."""
    lam = X.base.lam.rep
    return float(np.linalg.norm(np.linalg.solve(lam, X.rep @ lam), 2))


def manifold_connection(field: Callable[[ProjectionPoint], TangentVector],
                        Y: TangentVector, t0: float = 0.0, h: float = 1e-4,
                        tol: float = 1e-6) -> TangentVector:
    """Covariant derivative of a vector field along the orbit curve of Y.

    The curve is q(t) = exp(t b) q exp(-t b) with b the horizontal generator
    of Y.  The field term is differentiated by a Richardson-refined central
    difference; the correction is [X_q, [V, q]] with V the velocity at t0.
    """
    b = horizontal_generator(Y).rep
    q0 = Y.base.rep
    alg = Y.algebra

    def q_at(t):
        e = expm(t * b)
        return ProjectionPoint(DoubledMatrix(alg, e @ q0 @ np.linalg.inv(e)))

    def diff(k):
        return (field(q_at(t0 + k)).rep - field(q_at(t0 - k)).rep) / (2 * k)

    dX = (4 * diff(h / 2) - diff(h)) / 3
    qt = q_at(t0) if t0 != 0 else Y.base
    Xq = field(qt).rep
    qr = qt.rep
    v = b @ qr - qr @ b
    w = v @ qr - qr @ v
    return TangentVector(qt, DoubledMatrix(alg, dX + Xq @ w - w @ Xq), tol=tol)
