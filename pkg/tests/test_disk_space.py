import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opdisk.algebra import Algebra, fun_calc, op_norm, sample
from opdisk.doubled import (
    DoubledMatrix,
    DoubledVector,
    GroupElement,
    exp_to_group,
    sample_group,
    sample_lie,
    sharp,
    theta,
)
from opdisk.disk_space import (
    ProjectionPoint,
    SpherePoint,
    TangentVector,
    act,
    act_sphere,
    basis_completion,
    disk_coords,
    disk_point,
    disk_tangent,
    disk_velocity,
    fiber_unitary,
    horizontal_generator,
    lambda_of_q,
    lift_form,
    proj_from_sphere,
    q_from_b,
    sample_point,
    sample_sphere,
    sample_tangent,
    section_sr,
    tangent_from_lift,
)
from opdisk.errors import (
    BasePointMismatch,
    DifferentFibers,
    InvalidPoint,
    NotHorizontal,
    NotInDisk,
)

S = Algebra.scalar()
M4 = Algebra.matrix(4)
seeds = st.integers(0, 2**32 - 1)
R2 = np.sqrt(2)


def codiagonal_tangent(c):
    """theta-symmetric codiagonal tangent [[0, -c*], [c, 0]] at p."""
    alg = c.algebra
    X = DoubledMatrix.from_blocks(alg.zero(), -c.adj, c, alg.zero())
    return TangentVector(ProjectionPoint.base(alg), X)


# -- examples ----------------------------------------------------------------------


def test_q_from_b_examples(alg):
    assert q_from_b(alg.zero()).q.dist(DoubledMatrix.p(alg)) == 0
    got = q_from_b(S.element(1.0)).rep
    np.testing.assert_allclose(got, [[2, -R2], [R2, -1]], atol=1e-15)


def test_lambda_examples(alg):
    p = ProjectionPoint.base(alg)
    assert lambda_of_q(p).dist(DoubledMatrix.identity(alg)) < 1e-15
    np.testing.assert_allclose(lambda_of_q(q_from_b(S.element(1.0))).rep, [[R2, 1], [1, R2]], atol=1e-14)
    b = sample(alg, 3)
    one = alg.identity()
    block = DoubledMatrix.from_blocks(
        fun_calc(one + b.adj @ b, "sqrt"), b.adj, b, fun_calc(one + b @ b.adj, "sqrt"))
    assert lambda_of_q(q_from_b(b)).dist(block) < 1e-12


def test_projection_examples(alg):
    e1 = SpherePoint(DoubledVector.e1(alg))
    assert proj_from_sphere(e1).q.dist(DoubledMatrix.p(alg)) == 0
    q = sample_point(alg, 2)
    assert proj_from_sphere(section_sr(q)).dist(q) < 1e-12
    x = sample_sphere(alg, 5)
    u = sample(alg, 6, "unitary")
    assert proj_from_sphere(x).dist(proj_from_sphere(x @ u)) < 1e-12


def test_projection_applies_theta():
    x = sample_sphere(M4, 1)
    v = DoubledVector(M4, np.random.default_rng(2).standard_normal((8, 4)))
    px = proj_from_sphere(x).q
    assert (px @ v - x.x @ theta(x.x, v)).norm() < 1e-12


def test_section_examples(alg):
    assert section_sr(ProjectionPoint.base(alg)).x.rep.tolist() == DoubledVector.e1(alg).rep.tolist()
    b = sample(alg, 4)
    x = section_sr(q_from_b(b))
    root = fun_calc(b.adj @ b + 1, "sqrt")
    assert (x.x1 - root).norm() < 1e-12 and (x.x2 - b).norm() < 1e-12
    assert (theta(x.x, x.x) - 1).norm() < 1e-12


def test_fiber_unitary_examples(alg):
    x = sample_sphere(alg, 7)
    assert (fiber_unitary(x, x) - 1).norm() < 1e-12
    u0 = sample(alg, 8, "unitary")
    assert (fiber_unitary(x, x @ u0) - u0).norm() < 1e-12
    q = proj_from_sphere(x)
    assert (fiber_unitary(x, q.sr) - theta(x.x, q.sr.x)).norm() == 0
    with pytest.raises(DifferentFibers):
        fiber_unitary(x, sample_sphere(alg, 99))


def test_lift_examples(alg):
    p = ProjectionPoint.base(alg)
    e1 = SpherePoint(DoubledVector.e1(alg))
    zero = TangentVector(p, DoubledMatrix.zero(alg))
    assert lift_form(zero, e1).norm() == 0
    c = sample(alg, 9)
    v = lift_form(codiagonal_tangent(c), e1)
    assert v.x1.norm() == 0 and (v.x2 - c).norm() == 0


def test_lift_equivariance_and_base_check(alg):
    q = sample_point(alg, 10)
    X = sample_tangent(q, 11)
    u = sample(alg, 12, "unitary")
    x = q.sr
    assert (lift_form(X, x @ u) - lift_form(X, x) @ u).norm() < 1e-12
    with pytest.raises(BasePointMismatch):
        lift_form(X, sample_sphere(alg, 13))


def test_tangent_from_lift_examples(alg):
    x = sample_sphere(alg, 14)
    assert tangent_from_lift(x, DoubledVector(alg, np.zeros((2 * alg.size, alg.size)))).X.norm() == 0
    with pytest.raises(NotHorizontal):
        tangent_from_lift(x, x.x)


def test_horizontal_generator_examples(alg):
    p = ProjectionPoint.base(alg)
    assert horizontal_generator(TangentVector(p, DoubledMatrix.zero(alg))).norm() == 0
    X = codiagonal_tangent(sample(alg, 15))
    a = horizontal_generator(X)
    assert (a.matrix @ p.q - p.q @ a.matrix).dist(X.X) < 1e-14
    # block computation at p: the generator is X (2p - 1) = [[0, c*], [c, 0]]
    assert a.matrix.dist(X.X @ (2 * p.q - DoubledMatrix.identity(alg))) < 1e-14
    Y = sample_tangent(sample_point(alg, 16), 17)
    b = horizontal_generator(Y)
    assert sharp(b.matrix).dist(-b.matrix) == 0


def test_action_examples(alg):
    q = sample_point(alg, 18)
    assert act(GroupElement.identity(alg), q).dist(q) < 1e-14
    d = GroupElement.diagonal(sample(alg, 19, "unitary"), sample(alg, 20, "unitary"))
    p = ProjectionPoint.base(alg)
    assert act(d, p).dist(p) < 1e-14
    rng = np.random.default_rng(21)
    for _ in range(20):
        m = exp_to_group(sample_lie(alg, rng), rng.uniform(-1.5, 1.5))
        act(m, q)  # validation inside the constructor


def test_basis_completion_examples(alg):
    y, z = basis_completion(SpherePoint(DoubledVector.e1(alg)))
    assert (y - DoubledVector.e1(alg)).norm() < 1e-15
    assert (z - DoubledVector.e2(alg)).norm() < 1e-15
    x = sample_sphere(alg, 22)
    y, _ = basis_completion(x)
    y2, _ = basis_completion(SpherePoint(y))
    assert (y2 - y).norm() < 1e-12


def test_disk_examples(alg):
    assert disk_coords(ProjectionPoint.base(alg)).norm() == 0
    got = disk_point(S.element(0.5)).rep
    want = np.array([[1, -0.5], [0.5, -0.25]]) / 0.75
    np.testing.assert_allclose(got, want, atol=1e-14)
    with pytest.raises(NotInDisk):
        disk_point(alg.identity())


def test_validation_rejects_bad_points(alg):
    with pytest.raises(InvalidPoint):
        ProjectionPoint(DoubledMatrix.identity(alg) * 0.5)
    with pytest.raises(InvalidPoint):
        ProjectionPoint(DoubledMatrix.identity(alg) - DoubledMatrix.p(alg))  # fails positivity
    with pytest.raises(InvalidPoint):
        SpherePoint(DoubledVector.e2(alg))
    with pytest.raises(InvalidPoint):
        TangentVector(ProjectionPoint.base(alg), DoubledMatrix.identity(alg))


def test_disk_tangent_matches_finite_difference(alg):
    z = sample(alg, 23, "contraction", r=0.6)
    a = sample(alg, 24)
    h = 1e-5
    fd = (disk_point(z + a * h).rep - disk_point(z - a * h).rep) / (2 * h)
    T = disk_tangent(z, a)
    assert np.linalg.norm(fd - T.rep, 2) < 1e-8
    assert (disk_velocity(T) - a).norm() < 1e-11


# -- properties -----------------------------------------------------------------------


@given(seed=seeds, scale=st.floats(0.01, 2.0))
def test_structure_of_q_from_b(seed, scale):
    b = sample(M4, seed) * scale
    q = q_from_b(b)
    lam = q.lam.rep
    rho = DoubledMatrix.rho(M4).rep
    p = DoubledMatrix.p(M4).rep
    assert np.linalg.norm(q.rep @ q.rep - q.rep, 2) <= 1e-9 * (1 + scale**2) ** 2
    assert np.linalg.norm(lam @ rho @ lam - rho, 2) <= 1e-9 * (1 + scale**2)
    assert np.linalg.norm(lam @ p @ np.linalg.inv(lam) - q.rep, 2) <= 1e-9 * (1 + scale**2)
    assert proj_from_sphere(q.sr).dist(q) <= 1e-9 * (1 + scale**2)


@given(seed=seeds)
def test_lift_lemma(seed):
    rng = np.random.default_rng(seed)
    x = sample_sphere(M4, rng)
    q = proj_from_sphere(x)
    X = sample_tangent(q, rng)
    v = lift_form(X, x)
    assert np.linalg.norm(q.rep @ v.rep, 2) <= 1e-9
    assert tangent_from_lift(x, v).X.dist(X.X) <= 1e-9


@given(seed=seeds)
def test_action_equivariance(seed):
    rng = np.random.default_rng(seed)
    x = sample_sphere(M4, rng)
    m = sample_group(M4, rng)
    assert act(m, proj_from_sphere(x)).dist(proj_from_sphere(act_sphere(m, x))) <= 1e-9


@given(seed=seeds)
def test_basis_completion_relations(seed):
    x = sample_sphere(M4, seed)
    y, z = basis_completion(x)
    one = M4.identity()
    px = proj_from_sphere(x).q
    assert (theta(y, y) - one).norm() <= 1e-9
    assert (theta(z, z) + one).norm() <= 1e-9
    assert (theta(y, z)).norm() <= 1e-9
    assert (px @ y - y).norm() <= 1e-9 and (px @ z).norm() <= 1e-9
    for positive in (y.x1, z.x2):
        assert (positive - positive.adj).norm() <= 1e-9
        assert np.linalg.eigvalsh(positive.hermitian_part().rep).min() > 0


@given(seed=seeds, r=st.floats(0.0, 0.95))
def test_disk_roundtrip(seed, r):
    z = sample(M4, seed) * 1.0
    z = z * (r / op_norm(z))
    assert (disk_coords(disk_point(z)) - z).norm() <= 1e-9
