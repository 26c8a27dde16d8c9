import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opdisk.algebra import Algebra, Valuation, op_norm, sample, valuate
from opdisk.doubled import DoubledVector, sample_vector, theta
from opdisk.disk_space import disk_tangent, sample_sphere
from opdisk.errors import NotInDisk, NotInHalfSpace, NotOnSphere, NotPositive, StepOutOfHalfSpace
from opdisk.halfspace import (
    HalfSpacePoint,
    HalfTangent,
    d_liouville,
    d_liouville_fd,
    halfspace_lift,
    halfspace_projection,
    halfspace_section,
    liouville,
    mobius_derivative,
    mobius_to_disk,
    mobius_to_halfspace,
    sample_half_tangent,
    sample_halfspace,
    spd_action,
    spd_bracket,
    theta_h,
    to_halfspace_vector,
    trace_product,
    trace_product_split,
    x_perp,
)
from opdisk.kahler import hilbertian_product

S = Algebra.scalar()
M3 = Algebra.matrix(3)
seeds = st.integers(0, 2**32 - 1)


def point(zeta):
    return HalfSpacePoint.from_zeta(S.element(zeta))


def vec(a, b):
    return DoubledVector.from_components(S.element(a), S.element(b))


def test_point_validation():
    with pytest.raises(NotInHalfSpace):
        point(1.0)
    with pytest.raises(NotInHalfSpace):
        HalfSpacePoint(S.element(1j), S.element(1))


def test_mobius_examples():
    assert mobius_to_disk(point(1j)).data == pytest.approx(0)
    assert mobius_to_halfspace(S.element(0)).zeta.data == pytest.approx(1j)
    with pytest.raises(NotInDisk):
        mobius_to_halfspace(S.element(1.0))


def test_mobius_roundtrip(alg):
    h = sample_halfspace(alg, 1)
    assert op_norm(mobius_to_halfspace(mobius_to_disk(h)).zeta - h.zeta) < 1e-10 * max(1, op_norm(h.zeta))
    z = sample(alg, 2, "contraction")
    assert op_norm(mobius_to_disk(mobius_to_halfspace(z)) - z) < 1e-10


def test_mobius_derivative_fd(alg):
    h = sample_halfspace(alg, 3)
    v = sample_half_tangent(h, 4).v
    k = 1e-5
    fd = (mobius_to_disk(HalfSpacePoint.from_zeta(h.zeta + v * k))
          - mobius_to_disk(HalfSpacePoint.from_zeta(h.zeta - v * k))) / (2 * k)
    assert op_norm(fd - mobius_derivative(h, v)) < 1e-7


def test_theta_h_examples():
    x = vec(1, 0.5j)
    assert theta_h(x, x).data == pytest.approx(1)
    xp = x_perp(x)
    assert xp.x1.data == pytest.approx(1j) and xp.x2.data == pytest.approx(0.5)
    assert theta_h(xp, xp).data == pytest.approx(-1)
    assert theta_h(x, xp).data == pytest.approx(0)
    with pytest.raises(NotOnSphere):
        x_perp(vec(1, 0))


def test_cayley_intertwines(alg):
    x, y = sample_vector(alg, 5), sample_vector(alg, 6)
    assert op_norm(theta_h(to_halfspace_vector(x), to_halfspace_vector(y)) - theta(x, y)) < 1e-12
    s = to_halfspace_vector(sample_sphere(alg, 7, 0.8).x)
    assert op_norm(theta_h(s, s) - 1) < 1e-10


def test_section_example():
    x = halfspace_section(point(1j))
    assert x.x1.data == pytest.approx(1 / np.sqrt(2))
    assert x.x2.data == pytest.approx(1j / np.sqrt(2))


def test_section_and_perp(alg):
    h = sample_halfspace(alg, 8)
    x = halfspace_section(h)
    xp = x_perp(x)
    one = alg.identity()
    assert op_norm(theta_h(x, x) - one) < 1e-10
    assert op_norm(theta_h(x, xp)) < 1e-10
    assert op_norm(theta_h(xp, xp) + one) < 1e-10
    assert op_norm(x.x2 @ x.x1.inv() - h.zeta) < 1e-10


def test_lift_example():
    h = point(1j)
    k = halfspace_lift(h, HalfTangent(h, S.element(1)))
    # ((1/2), (i/2 - i)) * i / sqrt 2
    assert k.x1.data == pytest.approx(0.5j / np.sqrt(2))
    assert k.x2.data == pytest.approx(0.5 / np.sqrt(2))


def test_lift_in_projection_nullspace(alg):
    h = sample_halfspace(alg, 9)
    k = halfspace_lift(h, sample_half_tangent(h, 10))
    P = halfspace_projection(halfspace_section(h)).rep
    assert np.linalg.norm(P @ k.rep) < 1e-10 * max(1, np.linalg.norm(k.rep))
    assert np.linalg.norm(P @ P - P) < 1e-10 * max(1, np.linalg.norm(P)) ** 2


def test_trace_product_example():
    h = point(1j)
    one = HalfTangent(h, S.element(1))
    nu = Valuation.default(S)
    assert trace_product(nu, one, one).data == pytest.approx(-0.25)
    re, im = trace_product_split(nu, one, one)
    assert re.data == pytest.approx(-0.25) and im.data == pytest.approx(0)


def test_trace_product_split_agrees(alg):
    nu = Valuation.default(alg)
    h = sample_halfspace(alg, 11)
    v, w = sample_half_tangent(h, 12), sample_half_tangent(h, 13)
    tp = trace_product(nu, v, w)
    re, im = trace_product_split(nu, v, w)
    assert op_norm(tp - (re + im * 1j)) < 1e-12


def test_liouville_examples():
    nu = Valuation.default(S)
    h = point(1 + 1j)
    assert liouville(nu, h, HalfTangent(h, S.element(1j))).data == pytest.approx(1)
    assert liouville(nu, h, HalfTangent(h, S.element(1))).data == pytest.approx(0)


def test_d_liouville_example():
    nu = Valuation.default(S)
    h = point(1j)
    v, w = HalfTangent(h, S.element(1)), HalfTangent(h, S.element(1j))
    assert d_liouville(nu, h, v, w).data == pytest.approx(1)
    assert d_liouville(nu, h, w, v).data == pytest.approx(-1)


def test_d_liouville_matches_fd(alg):
    nu = Valuation.default(alg)
    h = sample_halfspace(alg, 14)
    v, w = sample_half_tangent(h, 15), sample_half_tangent(h, 16)
    closed, fd = d_liouville_fd(nu, h, v, w)
    assert op_norm(closed - fd) < 1e-6


def test_d_liouville_fd_step_out():
    nu = Valuation.default(S)
    h = point(0.01j)
    v = HalfTangent(h, S.element(1j))
    with pytest.raises(StepOutOfHalfSpace):
        d_liouville_fd(nu, h, v, HalfTangent(h, S.element(1)), h=0.1)


@given(seed=seeds)
def test_liouville_constant(seed):
    rng = np.random.default_rng(seed)
    nu = Valuation.default(M3)
    h = sample_halfspace(M3, rng)
    v, w = sample_half_tangent(h, rng), sample_half_tangent(h, rng)
    im = trace_product(nu, v, w).data.imag
    if abs(im) < 1e-8:
        return
    assert d_liouville(nu, h, v, w).data.real / im == pytest.approx(-4, rel=1e-8)


def test_cross_model_constant(alg):
    nu = Valuation.default(alg)
    h = sample_halfspace(alg, 17)
    v, w = sample_half_tangent(h, 18), sample_half_tangent(h, 19)
    z = mobius_to_disk(h)
    T1 = disk_tangent(z, mobius_derivative(h, v.v))
    T2 = disk_tangent(z, mobius_derivative(h, w.v))
    disk_val = np.diag(valuate(nu, hilbertian_product(T1, T2).matrix).rep)
    ratio = disk_val / np.diag(trace_product(nu, v, w).rep)
    assert np.allclose(ratio, -1, rtol=1e-9)


def test_spd_examples():
    nu = Valuation.default(S)
    one = S.element(1)
    assert spd_bracket(nu, one, one, one).data == pytest.approx(1)
    assert spd_bracket(nu, S.element(2), one, one).data == pytest.approx(0.25)
    with pytest.raises(NotPositive):
        spd_bracket(nu, S.element(-1), one, one)


@given(seed=seeds)
def test_spd_invariance(seed):
    rng = np.random.default_rng(seed)
    nu = Valuation.default(M3)
    y = sample(M3, rng, "positive")
    x1, x2 = sample(M3, rng, "hermitian"), sample(M3, rng, "hermitian")
    g = sample(M3, rng) + M3.identity() * 1.5
    a = spd_bracket(nu, y, x1, x2)
    b = spd_bracket(nu, spd_action(g, y), spd_action(g, x1), spd_action(g, x2))
    assert op_norm(a - b) <= 1e-9 * max(1.0, op_norm(a))


def test_spd_quarter_relation(alg):
    nu = Valuation.default(alg)
    y = sample(alg, 20, "positive")
    x1, x2 = sample(alg, 21, "hermitian"), sample(alg, 22, "hermitian")
    at = HalfSpacePoint(alg.zero(), y)
    tp = trace_product(nu, HalfTangent(at, x1 * 1j), HalfTangent(at, x2 * 1j))
    assert op_norm(tp + spd_bracket(nu, y, x1, x2) * 0.25) < 1e-10


def test_liouville_vanishes_on_imaginary_axis_and_is_real_linear(alg):
    nu = Valuation.default(alg)
    y = sample(alg, 23, "positive")
    on_axis = HalfSpacePoint(alg.zero(), y)
    assert op_norm(liouville(nu, on_axis, sample_half_tangent(on_axis, 24))) == 0
    h = sample_halfspace(alg, 25)
    v, w = sample_half_tangent(h, 26), sample_half_tangent(h, 27)
    lhs = liouville(nu, h, HalfTangent(h, v.v * 2.5 - w.v))
    rhs = liouville(nu, h, v) * 2.5 - liouville(nu, h, w)
    assert op_norm(lhs - rhs) < 1e-12


def test_d_liouville_antisymmetry(alg):
    nu = Valuation.default(alg)
    h = sample_halfspace(alg, 28)
    v, w = sample_half_tangent(h, 29), sample_half_tangent(h, 30)
    assert op_norm(d_liouville(nu, h, v, v)) == 0
    assert op_norm(d_liouville(nu, h, v, w) + d_liouville(nu, h, w, v)) < 1e-14
