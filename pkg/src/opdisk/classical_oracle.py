"""Closed-form quantities on the classical Poincare disk.

These are plain complex-number formulas, written without any of the operator
machinery so they can serve as independent references at A = C.  For a
commutative algebra they apply componentwise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotInDisk


@dataclass(frozen=True)
class ScalarDiskPoint:
    z: complex

    def __post_init__(self):
        if not abs(self.z) < 1:
            raise NotInDisk(f"|z| = {abs(self.z):.6g} >= 1")


def _z(p) -> complex:
    return complex(p.z if isinstance(p, ScalarDiskPoint) else ScalarDiskPoint(p).z)


def poincare_metric(z, a: complex, b: complex) -> complex:
    """conj(a) b / (1 - |z|^2)^2."""
    zz = _z(z)
    return np.conj(a) * b / (1 - abs(zz) ** 2) ** 2


@dataclass(frozen=True)
class PolyField:
    """a(z) = sum c[j, k] z^j conj(z)^k."""

    coeffs: tuple[tuple[complex, ...], ...]

    @classmethod
    def from_array(cls, c) -> "PolyField":
        arr = np.atleast_2d(np.asarray(c, dtype=complex))
        return cls(tuple(tuple(complex(v) for v in row) for row in arr))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, z: complex) -> complex:
        c = self.array
        j = np.arange(c.shape[0])[:, None]
        k = np.arange(c.shape[1])[None, :]
        return complex(np.sum(c * z ** j * np.conj(z) ** k))

    def directional(self, z: complex, b: complex) -> complex:
        """d/dt a(z + t b) at t = 0."""
        c = self.array
        out = 0j
        for j in range(c.shape[0]):
            for k in range(c.shape[1]):
                if c[j, k] == 0:
                    continue
                if j:
                    out += c[j, k] * j * z ** (j - 1) * np.conj(z) ** k * b
                if k:
                    out += c[j, k] * k * z ** j * np.conj(z) ** (k - 1) * np.conj(b)
        return complex(out)


def scalar_connection(field: PolyField, b: complex) -> complex:
    """Covariant derivative at the origin: the directional derivative along b."""
    return field.directional(0j, b)


def scalar_moment(z, alpha: float, beta: float, w: complex) -> complex:
    """(1/(1 - |z|^2)) (1/2 (alpha - beta |z|^2) + (1/2i)(w z - conj(w) conj(z)))."""
    zz = _z(z)
    r = abs(zz) ** 2
    return (0.5 * (alpha - beta * r) + (w * zz - np.conj(w) * np.conj(zz)) / 2j) / (1 - r)
