"""Doubled objects over an algebra: A^2, M_2(A), the form theta and U(theta).

A ``DoubledVector`` over an algebra with faithful representation of size s
is stored as a ``2s x s`` array; a ``DoubledMatrix`` as a ``2s x 2s`` array.
Block ``(i, j)`` is the representation of the component ``m_ij``.
"""
from __future__ import annotations

from numbers import Number

import numpy as np
from scipy.linalg import expm

from .algebra import Algebra, AlgebraElement, sample
from .errors import AlgebraMismatch, NotInGroup

GROUP_TOL = 1e-8


def _blocks(rep: np.ndarray, s: int):
    return rep[:s, :s], rep[:s, s:], rep[s:, :s], rep[s:, s:]


class DoubledVector:
    """Column vector (x1, x2) with entries in an algebra."""

    __slots__ = ("algebra", "rep")
    __array_ufunc__ = None

    def __init__(self, algebra: Algebra, rep):
        s = algebra.size
        rep = algebra.project(np.array(rep, dtype=complex))
        if rep.shape != (2 * s, s):
            raise ValueError(f"doubled vector must be {2 * s}x{s}, got {rep.shape}")
        rep.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("DoubledVector is immutable")

    @classmethod
    def from_components(cls, x1: AlgebraElement, x2: AlgebraElement) -> "DoubledVector":
        if x1.algebra != x2.algebra:
            raise AlgebraMismatch("components live in different algebras")
        return cls(x1.algebra, np.vstack([x1.rep, x2.rep]))

    @classmethod
    def e1(cls, algebra: Algebra) -> "DoubledVector":
        return cls.from_components(algebra.identity(), algebra.zero())

    @classmethod
    def e2(cls, algebra: Algebra) -> "DoubledVector":
        return cls.from_components(algebra.zero(), algebra.identity())

    @property
    def x1(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.rep[: self.algebra.size])

    @property
    def x2(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.rep[self.algebra.size:])

    def _same(self, other: "DoubledVector") -> None:
        if not isinstance(other, DoubledVector):
            raise TypeError(f"expected DoubledVector, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")

    def __add__(self, other: "DoubledVector") -> "DoubledVector":
        self._same(other)
        return DoubledVector(self.algebra, self.rep + other.rep)

    def __sub__(self, other: "DoubledVector") -> "DoubledVector":
        self._same(other)
        return DoubledVector(self.algebra, self.rep - other.rep)

    def __neg__(self) -> "DoubledVector":
        return DoubledVector(self.algebra, -self.rep)

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return DoubledVector(self.algebra, complex(c) * self.rep)

    __rmul__ = __mul__

    def __matmul__(self, a: AlgebraElement) -> "DoubledVector":
        """Right module action x . a."""
        if not isinstance(a, AlgebraElement):
            return NotImplemented
        if a.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {a.algebra}")
        return DoubledVector(self.algebra, self.rep @ a.rep)

    def norm(self) -> float:
        return float(np.linalg.norm(self.rep, 2))

    def __repr__(self) -> str:
        return f"DoubledVector({self.algebra}, x1={self.x1.data!r}, x2={self.x2.data!r})"


class DoubledMatrix:
    """2 x 2 matrix with entries in an algebra, acting on :class:`DoubledVector`."""

    __slots__ = ("algebra", "rep")
    __array_ufunc__ = None

    def __init__(self, algebra: Algebra, rep):
        s = algebra.size
        rep = algebra.project(np.array(rep, dtype=complex))
        if rep.shape != (2 * s, 2 * s):
            raise ValueError(f"doubled matrix must be {2 * s}x{2 * s}, got {rep.shape}")
        rep.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("DoubledMatrix is immutable")

    @classmethod
    def from_blocks(cls, m11: AlgebraElement, m12: AlgebraElement,
                    m21: AlgebraElement, m22: AlgebraElement) -> "DoubledMatrix":
        algs = {m.algebra for m in (m11, m12, m21, m22)}
        if len(algs) != 1:
            raise AlgebraMismatch("blocks live in different algebras")
        return cls(m11.algebra, np.block([[m11.rep, m12.rep], [m21.rep, m22.rep]]))

    @classmethod
    def identity(cls, algebra: Algebra) -> "DoubledMatrix":
        return cls(algebra, np.eye(2 * algebra.size))

    @classmethod
    def zero(cls, algebra: Algebra) -> "DoubledMatrix":
        return cls(algebra, np.zeros((2 * algebra.size, 2 * algebra.size)))

    @classmethod
    def rho(cls, algebra: Algebra) -> "DoubledMatrix":
        s = algebra.size
        return cls(algebra, np.diag(np.r_[np.ones(s), -np.ones(s)]))

    @classmethod
    def p(cls, algebra: Algebra) -> "DoubledMatrix":
        s = algebra.size
        return cls(algebra, np.diag(np.r_[np.ones(s), np.zeros(s)]))

    @classmethod
    def diag(cls, u1: AlgebraElement, u2: AlgebraElement) -> "DoubledMatrix":
        zero = u1.algebra.zero()
        return cls.from_blocks(u1, zero, zero, u2)

    def block(self, i: int, j: int) -> AlgebraElement:
        s = self.algebra.size
        return AlgebraElement(self.algebra, self.rep[(i - 1) * s:i * s, (j - 1) * s:j * s])

    m11 = property(lambda self: self.block(1, 1))
    m12 = property(lambda self: self.block(1, 2))
    m21 = property(lambda self: self.block(2, 1))
    m22 = property(lambda self: self.block(2, 2))

    def _same(self, other) -> None:
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")

    def __add__(self, other: "DoubledMatrix") -> "DoubledMatrix":
        self._same(other)
        return DoubledMatrix(self.algebra, self.rep + other.rep)

    def __sub__(self, other: "DoubledMatrix") -> "DoubledMatrix":
        self._same(other)
        return DoubledMatrix(self.algebra, self.rep - other.rep)

    def __neg__(self) -> "DoubledMatrix":
        return DoubledMatrix(self.algebra, -self.rep)

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return DoubledMatrix(self.algebra, complex(c) * self.rep)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, DoubledMatrix):
            self._same(other)
            return DoubledMatrix(self.algebra, self.rep @ other.rep)
        if isinstance(other, DoubledVector):
            self._same(other)
            return DoubledVector(self.algebra, self.rep @ other.rep)
        return NotImplemented

    @property
    def adj(self) -> "DoubledMatrix":
        return DoubledMatrix(self.algebra, self.rep.conj().T)

    def inv(self) -> "DoubledMatrix":
        return DoubledMatrix(self.algebra, np.linalg.inv(self.rep))

    def commutator(self, other: "DoubledMatrix") -> "DoubledMatrix":
        return self @ other - other @ self

    def norm(self) -> float:
        return float(np.linalg.norm(self.rep, 2))

    def dist(self, other: "DoubledMatrix") -> float:
        return float(np.linalg.norm(self.rep - other.rep, 2))

    def __repr__(self) -> str:
        return f"DoubledMatrix({self.algebra}, shape={self.rep.shape})"


# -- the form theta and the sharp adjoint ---------------------------------------


def _rho_diag(s: int) -> np.ndarray:
    return np.r_[np.ones(s), -np.ones(s)]


def theta(x: DoubledVector, y: DoubledVector) -> AlgebraElement:
    """theta(x, y) = x1* y1 - x2* y2."""
    if x.algebra != y.algebra:
        raise AlgebraMismatch(f"{x.algebra} vs {y.algebra}")
    alg = x.algebra
    s = alg.size
    val = x.rep[:s].conj().T @ y.rep[:s] - x.rep[s:].conj().T @ y.rep[s:]
    return AlgebraElement(alg, alg.project(val))


def sharp_rep(rep: np.ndarray) -> np.ndarray:
    """rho m* rho on a raw 2s x 2s array."""
    r = _rho_diag(rep.shape[0] // 2)
    return r[:, None] * rep.conj().T * r[None, :]


def sharp(m: DoubledMatrix) -> DoubledMatrix:
    """The adjoint with respect to theta."""
    return DoubledMatrix(m.algebra, sharp_rep(m.rep))


def group_defect(m: DoubledMatrix) -> float:
    eye = np.eye(m.rep.shape[0])
    ms = sharp_rep(m.rep)
    return max(float(np.linalg.norm(ms @ m.rep - eye, 2)),
               float(np.linalg.norm(m.rep @ ms - eye, 2)))


def is_group_member(m: DoubledMatrix, tol: float = GROUP_TOL) -> bool:
    return group_defect(m) <= tol


class GroupElement:
    """An element of U(theta), validated on construction."""

    __slots__ = ("m",)

    def __init__(self, m: DoubledMatrix, tol: float = GROUP_TOL):
        defect = group_defect(m)
        if defect > tol:
            raise NotInGroup(f"group defect {defect:.3e} exceeds {tol:.1e}")
        object.__setattr__(self, "m", m)

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    @property
    def algebra(self) -> Algebra:
        return self.m.algebra

    @property
    def rep(self) -> np.ndarray:
        return self.m.rep

    def inverse(self) -> "GroupElement":
        # true inverse rather than sharp: keeps round-off from accumulating in orbits
        return GroupElement(self.m.inv())

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        return GroupElement(self.m @ other.m)

    @classmethod
    def identity(cls, algebra: Algebra) -> "GroupElement":
        return cls(DoubledMatrix.identity(algebra))

    @classmethod
    def diagonal(cls, u1: AlgebraElement, u2: AlgebraElement) -> "GroupElement":
        return cls(DoubledMatrix.diag(u1, u2))


# -- Lie algebra -------------------------------------------------------------------


class LieElement:
    """Element of the Lie algebra of U(theta).

    Stored as ``(a11, a22, a21)``; the diagonal blocks are anti-Hermitian by
    construction and ``a12 = a21*``.
    """

    __slots__ = ("a11", "a22", "a21")

    def __init__(self, a11: AlgebraElement, a22: AlgebraElement, a21: AlgebraElement):
        if not a11.algebra == a22.algebra == a21.algebra:
            raise AlgebraMismatch("blocks live in different algebras")
        object.__setattr__(self, "a11", (a11 - a11.adj) * 0.5)
        object.__setattr__(self, "a22", (a22 - a22.adj) * 0.5)
        object.__setattr__(self, "a21", a21)

    def __setattr__(self, name, value):
        raise AttributeError("LieElement is immutable")

    @classmethod
    def from_matrix(cls, m: DoubledMatrix) -> "LieElement":
        """Project a doubled matrix onto the Lie algebra."""
        return cls(m.m11, m.m22, (m.m21 + m.m12.adj) * 0.5)

    @classmethod
    def zero(cls, algebra: Algebra) -> "LieElement":
        z = algebra.zero()
        return cls(z, z, z)

    @property
    def algebra(self) -> Algebra:
        return self.a11.algebra

    @property
    def matrix(self) -> DoubledMatrix:
        return DoubledMatrix.from_blocks(self.a11, self.a21.adj, self.a21, self.a22)

    @property
    def rep(self) -> np.ndarray:
        return self.matrix.rep

    def __add__(self, other: "LieElement") -> "LieElement":
        return LieElement(self.a11 + other.a11, self.a22 + other.a22, self.a21 + other.a21)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return LieElement(self.a11 - other.a11, self.a22 - other.a22, self.a21 - other.a21)

    def __neg__(self) -> "LieElement":
        return LieElement(-self.a11, -self.a22, -self.a21)

    def __mul__(self, t):
        # real scalars only: i * (anti-Hermitian) would leave the algebra
        if not isinstance(t, Number) or complex(t).imag != 0:
            return NotImplemented
        t = float(complex(t).real)
        return LieElement(self.a11 * t, self.a22 * t, self.a21 * t)

    __rmul__ = __mul__

    def bracket(self, other: "LieElement") -> "LieElement":
        return LieElement.from_matrix(self.matrix.commutator(other.matrix))

    def norm(self) -> float:
        return self.matrix.norm()

    def __repr__(self) -> str:
        return f"LieElement({self.algebra}, norm={self.norm():.4g})"


def lie_split(a: LieElement) -> tuple[LieElement, LieElement]:
    """Split into the diagonal and codiagonal parts."""
    zero = a.algebra.zero()
    return LieElement(a.a11, a.a22, zero), LieElement(zero, zero, a.a21)


def exp_to_group(a: LieElement, t: float = 1.0) -> GroupElement:
    """exp(t a) as an element of U(theta)."""
    return GroupElement(DoubledMatrix(a.algebra, expm(t * a.matrix.rep)))


# -- samplers ---------------------------------------------------------------------


def sample_vector(algebra: Algebra, seed) -> DoubledVector:
    rng = np.random.default_rng(seed)
    return DoubledVector.from_components(sample(algebra, rng), sample(algebra, rng))


def sample_matrix(algebra: Algebra, seed) -> DoubledMatrix:
    rng = np.random.default_rng(seed)
    return DoubledMatrix.from_blocks(*(sample(algebra, rng) for _ in range(4)))


def sample_lie(algebra: Algebra, seed, scale: float = 1.0) -> LieElement:
    """Random Lie element with operator norm ``scale``."""
    rng = np.random.default_rng(seed)
    a = LieElement(sample(algebra, rng), sample(algebra, rng), sample(algebra, rng))
    nrm = a.norm()
    return a * (scale / nrm) if nrm > 0 else a


def sample_group(algebra: Algebra, seed, scale: float = 1.0) -> GroupElement:
    return exp_to_group(sample_lie(algebra, seed, scale))
