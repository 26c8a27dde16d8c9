import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opdisk.algebra import Algebra, op_norm, sample
from opdisk.bundles import FiberEndomorphism, endo_norm, tangent_times
from opdisk.classical_oracle import PolyField, poincare_metric, scalar_connection
from opdisk.doubled import DoubledMatrix, sample_group, sharp_rep
from opdisk.disk_space import (
    ProjectionPoint,
    TangentVector,
    act_tangent,
    disk_coords,
    disk_tangent,
    disk_velocity,
    sample_point,
    sample_tangent,
    tangent_projection,
)
from opdisk.kahler import (
    complex_structure,
    finsler_norm,
    hilbertian_product,
    manifold_connection,
    riemannian_form,
    symplectic_form,
)

S = Algebra.scalar()
M3 = Algebra.matrix(3)
seeds = st.integers(0, 2**32 - 1)


def codiagonal(alpha):
    alg = alpha.algebra
    X = DoubledMatrix.from_blocks(alg.zero(), -alpha.adj, alpha, alg.zero())
    return TangentVector(ProjectionPoint.base(alg), X)


def test_complex_structure_at_base(alg):
    X = codiagonal(sample(alg, 1))
    iX = complex_structure(X)
    assert iX.X.dist(X.X @ DoubledMatrix.rho(alg) * 1j) == 0


def test_complex_structure_squares_to_minus_one(alg):
    X = sample_tangent(sample_point(alg, 2), 3)
    assert complex_structure(complex_structure(X)).X.dist(-X.X) < 1e-11


def test_complex_structure_matches_disk_multiplication(alg):
    z = sample(alg, 4, "contraction")
    a = sample(alg, 5)
    X = disk_tangent(z, a)
    assert (disk_velocity(complex_structure(X)) - a * 1j).norm() < 1e-10


@pytest.mark.parametrize("z, expected", [(0.0, 1.0), (0.5, 16 / 9)])
def test_scalar_hilbertian_values(z, expected):
    one = S.element(1)
    X = disk_tangent(S.element(z), one)
    assert hilbertian_product(X, X).matrix.data == pytest.approx(expected, abs=1e-13)


def test_scalar_hilbertian_matches_poincare_metric():
    rng = np.random.default_rng(6)
    for _ in range(20):
        z = 0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        a, b = rng.standard_normal(2) @ [1, 1j], rng.standard_normal(2) @ [1, 1j]
        got = hilbertian_product(disk_tangent(S.element(z), S.element(a)),
                                 disk_tangent(S.element(z), S.element(b))).matrix.data
        ref = poincare_metric(z, a, b)
        assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


def test_hilbertian_compatibility(alg):
    q = sample_point(alg, 7)
    X, Y = sample_tangent(q, 8), sample_tangent(q, 9)
    h = hilbertian_product(X, Y).matrix
    assert op_norm(hilbertian_product(X, complex_structure(Y)).matrix - h * 1j) < 1e-10
    assert op_norm(hilbertian_product(complex_structure(X), Y).matrix + h * 1j) < 1e-10
    assert op_norm(hilbertian_product(Y, X).matrix - h.adj) < 1e-10


def test_hilbertian_positivity(alg):
    X = sample_tangent(sample_point(alg, 10), 11)
    w = np.linalg.eigvalsh(hilbertian_product(X, X).matrix.hermitian_part().rep)
    assert w.min() > 0
    assert op_norm(hilbertian_product(X, X).matrix.imaginary_part()) < 1e-10


def test_module_linearity(alg):
    q = sample_point(alg, 12)
    X, Y = sample_tangent(q, 13), sample_tangent(q, 14)
    a = sample(alg, 15)
    phi = FiberEndomorphism(q.sr, a)
    lhs = hilbertian_product(X, tangent_times(Y, phi)).matrix
    rhs = hilbertian_product(X, Y).matrix @ a
    assert op_norm(lhs - rhs) < 1e-10


def test_symplectic_form_at_base():
    X, Y = codiagonal(S.element(1)), codiagonal(S.element(1j))
    assert symplectic_form(X, Y).matrix.data == pytest.approx(1.0)
    assert symplectic_form(Y, X).matrix.data == pytest.approx(-1.0)
    assert riemannian_form(X, Y).matrix.data == pytest.approx(0.0)
    rng = np.random.default_rng(16)
    for _ in range(5):
        a, b = rng.standard_normal(2) @ [1, 1j], rng.standard_normal(2) @ [1, 1j]
        om = symplectic_form(codiagonal(S.element(a)), codiagonal(S.element(b))).matrix.data
        assert om == pytest.approx((b * np.conj(a) - a * np.conj(b)) / 2j, abs=1e-13)


def test_finsler_examples(alg):
    X = codiagonal(sample(alg, 17))
    assert finsler_norm(X) == pytest.approx(X.X.norm(), rel=1e-12)
    Y = disk_tangent(S.element(0.5), S.element(1))
    assert finsler_norm(Y) == pytest.approx(4 / 3, rel=1e-12)


@given(seed=seeds)
def test_finsler_invariance(seed):
    rng = np.random.default_rng(seed)
    X = sample_tangent(sample_point(M3, rng), rng)
    m = sample_group(M3, rng, 0.8)
    assert finsler_norm(act_tangent(m, X)) == pytest.approx(finsler_norm(X), rel=1e-9)


def test_other_ordering_is_not_invariant():
    rng = np.random.default_rng(18)
    X = sample_tangent(sample_point(M3, rng), rng)
    m = sample_group(M3, rng, 1.0)
    Xm = act_tangent(m, X)

    def swapped(T):
        lam = T.base.lam.rep
        return np.linalg.norm(lam @ T.rep @ np.linalg.inv(lam), 2)

    assert abs(swapped(Xm) - swapped(X)) > 1e-3


@given(seed=seeds, scale=st.floats(0.2, 3.0))
def test_finsler_squared_is_norm_of_hilbertian_square(seed, scale):
    rng = np.random.default_rng(seed)
    X = sample_tangent(sample_point(M3, rng), rng) * scale
    assert finsler_norm(X) ** 2 == pytest.approx(endo_norm(hilbertian_product(X, X).value), rel=1e-9)


def test_connection_is_tangent(alg):
    q = sample_point(alg, 19)
    Y = sample_tangent(q, 20)
    M = DoubledMatrix(alg, np.random.default_rng(21).standard_normal(q.rep.shape))
    V = DoubledMatrix(alg, (M.rep + sharp_rep(M.rep)) / 2)
    W = manifold_connection(lambda qq: tangent_projection(qq, V), Y, tol=np.inf)
    w, qr = W.rep, q.rep
    assert np.linalg.norm(w @ qr + qr @ w - w, 2) < 1e-6 * max(1.0, np.linalg.norm(w, 2))
    assert np.linalg.norm(sharp_rep(w) - w, 2) < 1e-6 * max(1.0, np.linalg.norm(w, 2))


def test_connection_matches_classical_derivative_at_origin():
    rng = np.random.default_rng(22)
    for _ in range(5):
        poly = PolyField.from_array((rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))) / 2)
        b = complex(rng.standard_normal() + 1j * rng.standard_normal())

        def field(qq):
            z = disk_coords(qq).data
            return disk_tangent(S.element(z), S.element(poly(z)))

        Y = disk_tangent(S.zero(), S.element(b))
        got = disk_velocity(manifold_connection(field, Y, h=1e-3)).data
        assert got == pytest.approx(scalar_connection(poly, b), abs=1e-6)
