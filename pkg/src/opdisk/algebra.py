"""
Finite-dimensional C*-algebras
==============================

Three concrete algebras are supported:

* ``matrix(n)``       -- n x n complex matrices,
* ``commutative(k)``  -- k-tuples of complex numbers with componentwise product,
* ``scalar``          -- the complex numbers.

Every element keeps a faithful matrix representation ``rep`` (diagonal for
the commutative algebra, 1 x 1 for the scalar one).  All higher modules work
on these representations, so doubled objects over any of the three algebras
are plain ``2s x 2s`` complex arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Callable

import numpy as np

from .errors import AlgebraMismatch, NotHermitian, NotPositive, SingularSpectrum

HERMITIAN_TOL = 1e-8
POSITIVE_TOL = 1e-10
SINGULAR_TOL = 1e-12

_KINDS = ("matrix", "commutative", "scalar")


@dataclass(frozen=True)
class Algebra:
    """A concrete C*-algebra; ``kind`` and ``dim`` fix the carrier."""

    kind: str
    dim: int = 1

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.kind == "scalar" and self.dim != 1:
            raise ValueError("the scalar algebra has dim 1")
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")

    @classmethod
    def matrix(cls, n: int) -> "Algebra":
        return cls("matrix", int(n))

    @classmethod
    def commutative(cls, k: int) -> "Algebra":
        return cls("commutative", int(k))

    @classmethod
    def scalar(cls) -> "Algebra":
        return cls("scalar", 1)

    @classmethod
    def parse(cls, text: str) -> "Algebra":
        """Parse ``matrix:N``, ``commutative:K`` or ``scalar``."""
        kind, _, dim = text.strip().partition(":")
        if kind == "scalar" and not dim:
            return cls.scalar()
        if kind in ("matrix", "commutative") and dim:
            return cls(kind, int(dim))
        raise ValueError(f"cannot parse algebra {text!r}")

    def __str__(self) -> str:
        return "scalar" if self.kind == "scalar" else f"{self.kind}:{self.dim}"

    @property
    def size(self) -> int:
        """Dimension of the faithful matrix representation."""
        return self.dim

    @property
    def is_commutative(self) -> bool:
        return self.kind != "matrix"

    # -- construction -----------------------------------------------------

    def element(self, data) -> "AlgebraElement":
        """Build an element from its carrier value."""
        if self.kind == "matrix":
            rep = np.array(data, dtype=complex).reshape(self.dim, self.dim)
        elif self.kind == "commutative":
            rep = np.diag(np.array(data, dtype=complex).reshape(self.dim))
        else:
            rep = np.array(data, dtype=complex).reshape(1, 1)
        return AlgebraElement(self, rep)

    def from_rep(self, rep) -> "AlgebraElement":
        """Wrap a representation matrix, projecting onto the algebra."""
        return AlgebraElement(self, self.project(rep))

    def project(self, rep: np.ndarray) -> np.ndarray:
        """Zero the entries that fall outside the algebra (block-wise).

        Works for single elements and for block arrays whose blocks are
        ``size x size``, e.g. the 2s x 2s representation of M_2(A).
        """
        rep = np.asarray(rep, dtype=complex)
        if self.kind != "commutative" or self.dim == 1:
            return rep
        s = self.dim
        rows, cols = rep.shape[0] // s, rep.shape[1] // s
        return rep * np.kron(np.ones((rows, cols)), np.eye(s))

    def identity(self) -> "AlgebraElement":
        return AlgebraElement(self, np.eye(self.size, dtype=complex))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros((self.size, self.size), dtype=complex))

    def scalar_element(self, c: complex) -> "AlgebraElement":
        return AlgebraElement(self, c * np.eye(self.size, dtype=complex))


class AlgebraElement:
    """Immutable element of an :class:`Algebra`.

    ``@`` is the algebra product, ``*`` multiplies by a complex number and
    ``.adj`` is the involution.
    """

    __slots__ = ("algebra", "rep")
    __array_ufunc__ = None  # keep numpy scalars from broadcasting over us

    def __init__(self, algebra: Algebra, rep: np.ndarray):
        rep = np.array(rep, dtype=complex)
        s = algebra.size
        if rep.shape != (s, s):
            raise ValueError(f"representation must be {s}x{s}, got {rep.shape}")
        rep.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    @property
    def data(self):
        """The carrier value: matrix, k-tuple (as array) or complex number."""
        if self.algebra.kind == "matrix":
            return self.rep.copy()
        if self.algebra.kind == "commutative":
            return np.diag(self.rep).copy()
        return complex(self.rep[0, 0])

    def _check(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra} vs {other.algebra}")

    def __add__(self, other):
        if isinstance(other, Number):
            return AlgebraElement(self.algebra, self.rep + other * np.eye(self.algebra.size))
        self._check(other)
        return AlgebraElement(self.algebra, self.rep + other.rep)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Number):
            return self + (-other)
        self._check(other)
        return AlgebraElement(self.algebra, self.rep - other.rep)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.rep)

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return AlgebraElement(self.algebra, complex(c) * self.rep)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return AlgebraElement(self.algebra, self.rep / complex(c))

    def __matmul__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return AlgebraElement(self.algebra, self.algebra.project(self.rep @ other.rep))

    @property
    def adj(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.rep.conj().T)

    def commutator(self, other: "AlgebraElement") -> "AlgebraElement":
        return self @ other - other @ self

    def hermitian_part(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, (self.rep + self.rep.conj().T) / 2)

    def imaginary_part(self) -> "AlgebraElement":
        """(a - a*)/2i, so that a = Re a + i Im a with both parts Hermitian."""
        return AlgebraElement(self.algebra, (self.rep - self.rep.conj().T) / 2j)

    def inv(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.algebra.project(np.linalg.inv(self.rep)))

    def norm(self) -> float:
        return op_norm(self)

    def dist(self, other: "AlgebraElement") -> float:
        """Operator-norm distance."""
        return op_norm(self - other)

    def __repr__(self) -> str:
        return f"AlgebraElement({self.algebra}, {self.data!r})"


def op_norm(a: AlgebraElement) -> float:
    """Operator norm: largest singular value / largest modulus."""
    if a.algebra.kind == "matrix":
        return float(np.linalg.norm(a.rep, 2))
    return float(np.max(np.abs(np.diag(a.rep))))


def hermitian_apply(rep: np.ndarray, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply ``fn`` to the spectrum of an (already Hermitian) matrix."""
    w, v = np.linalg.eigh(rep)
    return (v * fn(w)) @ v.conj().T


def symmetrize(rep: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return (a + a*)/2, refusing inputs that are not Hermitian to ``tol``."""
    scale = max(1.0, float(np.linalg.norm(rep, 2)))
    defect = float(np.linalg.norm(rep - rep.conj().T, 2))
    if defect > tol * scale:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    return (rep + rep.conj().T) / 2


def _spectral_function(name: str):
    if name == "sqrt":
        return np.sqrt, False
    if name == "inv_sqrt":
        return lambda w: 1.0 / np.sqrt(w), True
    if name == "inverse":
        return lambda w: 1.0 / w, True
    if name == "abs":
        return np.abs, False
    raise ValueError(f"unsupported function {name!r}")


def fun_calc(a: AlgebraElement, f: str) -> AlgebraElement:
    """Hermitian functional calculus.

    ``f`` is one of ``sqrt``, ``inv_sqrt``, ``abs`` or ``inverse``.  ``abs``
    also accepts non-Hermitian input and returns (a* a)^{1/2}.
    """
    fn, inverting = _spectral_function(f)
    alg = a.algebra
    if f == "abs":
        try:
            rep = symmetrize(a.rep)
        except NotHermitian:
            return fun_calc(a.adj @ a, "sqrt")
    else:
        rep = symmetrize(a.rep)

    if alg.kind == "matrix":
        w, v = np.linalg.eigh(rep)
    else:
        w, v = np.diag(rep).real, None

    scale = max(1.0, float(np.max(np.abs(w))))
    if inverting and np.min(np.abs(w)) < SINGULAR_TOL * scale:
        raise SingularSpectrum(f"min |eigenvalue| {np.min(np.abs(w)):.3e}")
    if f in ("sqrt", "inv_sqrt"):
        if np.min(w) < -POSITIVE_TOL * scale:
            raise NotPositive(f"min eigenvalue {np.min(w):.3e} is negative")
        if f == "sqrt":
            w = np.clip(w, 0.0, None)

    fw = fn(w)
    if v is None:
        return AlgebraElement(alg, np.diag(fw.astype(complex)))
    return AlgebraElement(alg, (v * fw) @ v.conj().T)


def is_positive(a: AlgebraElement, tol: float = POSITIVE_TOL) -> bool:
    """True iff ``a`` is Hermitian and its spectrum is >= -tol (relative)."""
    scale = max(1.0, op_norm(a))
    if float(np.linalg.norm(a.rep - a.rep.conj().T, 2)) > tol * scale:
        return False
    w = np.linalg.eigvalsh((a.rep + a.rep.conj().T) / 2)
    return bool(w.min() >= -tol * scale)


def is_unitary(u: AlgebraElement, tol: float = 1e-9) -> bool:
    eye = np.eye(u.algebra.size)
    return bool(np.linalg.norm(u.rep.conj().T @ u.rep - eye, 2) <= tol
                and np.linalg.norm(u.rep @ u.rep.conj().T - eye, 2) <= tol)


# -- valuations ----------------------------------------------------------------


@dataclass(frozen=True)
class Valuation:
    """Positive tracial linear map into a commutative algebra.

    ``normalized-trace`` sends matrix(n) to the scalars; ``identity`` is the
    identity of a commutative or scalar algebra.
    """

    source: Algebra
    target: Algebra
    rule: str

    def __post_init__(self):
        if self.rule == "normalized-trace":
            ok = self.source.kind == "matrix" and self.target.kind == "scalar"
        elif self.rule == "identity":
            ok = self.source.is_commutative and self.target == self.source
        else:
            ok = False
        if not ok:
            raise ValueError(f"invalid valuation {self.rule} : {self.source} -> {self.target}")

    @classmethod
    def default(cls, algebra: Algebra) -> "Valuation":
        if algebra.kind == "matrix":
            return cls(algebra, Algebra.scalar(), "normalized-trace")
        return cls(algebra, algebra, "identity")

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return valuate(self, a)


def valuate(nu: Valuation, a: AlgebraElement) -> AlgebraElement:
    if a.algebra != nu.source:
        raise AlgebraMismatch(f"valuation source {nu.source} vs element in {a.algebra}")
    if nu.rule == "normalized-trace":
        return nu.target.element(np.trace(a.rep) / a.algebra.size)
    return a


def components(a: AlgebraElement) -> np.ndarray:
    """Values of a commutative/scalar element as a 1-d complex array."""
    if a.algebra.kind == "matrix":
        raise AlgebraMismatch("components() needs a commutative or scalar element")
    return np.diag(a.rep).copy()


# -- sampling ----------------------------------------------------------------

STYLES = ("general", "hermitian", "antihermitian", "contraction", "unitary", "positive")


def sample(algebra: Algebra, seed, style: str = "general", r: float = 0.9) -> AlgebraElement:
    """Deterministic random element.

    ``seed`` is an int or a ``numpy.random.Generator``.  ``contraction``
    rescales to operator norm ``r``; ``positive`` returns an element with
    spectrum in [0.5, 2.5].
    """
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}")
    rng = np.random.default_rng(seed)
    s = algebra.size
    if algebra.kind == "matrix":
        g = (rng.standard_normal((s, s)) + 1j * rng.standard_normal((s, s))) / np.sqrt(2 * s)
    else:
        g = np.diag(rng.standard_normal(s) + 1j * rng.standard_normal(s)) / np.sqrt(2)

    if style == "general":
        rep = g
    elif style == "hermitian":
        rep = (g + g.conj().T) / 2
    elif style == "antihermitian":
        rep = (g - g.conj().T) / 2
    elif style == "contraction":
        if not 0 < r < 1:
            raise ValueError("contraction radius must lie in (0, 1)")
        nrm = np.linalg.norm(g, 2)
        rep = g * (r / nrm) if nrm > 0 else g
    elif style == "unitary":
        if algebra.kind == "matrix":
            qm, rm = np.linalg.qr(g)
            d = np.diag(rm)
            rep = qm * (d / np.abs(d))
        else:
            rep = np.diag(np.exp(1j * np.angle(np.diag(g))))
    else:  # positive
        if algebra.kind == "matrix":
            qm, _ = np.linalg.qr(g)
            w = rng.uniform(0.5, 2.5, size=s)
            rep = (qm * w) @ qm.conj().T
            rep = (rep + rep.conj().T) / 2
        else:
            rep = np.diag(rng.uniform(0.5, 2.5, size=s).astype(complex))
    return AlgebraElement(algebra, rep)
