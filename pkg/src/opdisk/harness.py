"""Seeded verification campaigns and their JSON / CSV reports.

Every check draws ``samples`` independent inputs.  Sample ``i`` of a check
uses the generator ``default_rng([seed, salt, i])`` where ``salt`` is a CRC
of the check name, so results do not depend on execution order and samples
may run on a thread pool (``OPDISK_THREADS`` caps its size).
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from .algebra import Algebra, AlgebraElement, Valuation, fun_calc, op_norm, sample, valuate
from .bundles import (
    AlgebraPolynomial,
    curvature,
    curvature_fd_oracle,
    endo_norm,
    leibniz_defect,
    orbit_curve,
    taut_derivative,
    taut_derivative_fd,
)
from .classical_oracle import PolyField, poincare_metric, scalar_connection, scalar_moment
from .doubled import (
    DoubledMatrix,
    LieElement,
    exp_to_group,
    group_defect,
    sample_group,
    sample_lie,
    sample_matrix,
    sample_vector,
    sharp_rep,
    theta,
)
from .disk_space import (
    ProjectionPoint,
    act,
    act_sphere,
    act_tangent,
    basis_completion,
    disk_coords,
    disk_point,
    disk_tangent,
    disk_velocity,
    lift_form,
    proj_from_sphere,
    q_from_b,
    sample_point,
    sample_sphere,
    sample_tangent,
    tangent_from_lift,
    tangent_projection,
)
from .errors import ConfigError, OpDiskError
from .halfspace import (
    HalfSpacePoint,
    HalfTangent,
    d_liouville_fd,
    halfspace_lift,
    halfspace_projection,
    halfspace_section,
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
    x_perp,
)
from .kahler import (
    complex_structure,
    finsler_norm,
    hilbertian_product,
    manifold_connection,
    symplectic_form,
)
from .moment import (
    convexity_witness,
    moment_equivariance_defect,
    moment_gradient_check,
    moment_map,
    poisson_defect,
    poisson_identity_defect,
    restricted_image,
    tau_moment,
    valuated_moment,
    witness_defect,
)

SCHEMA = 1
SUITES = ("algebraic", "differential", "scalar_oracle", "moment", "halfspace")


@dataclass(frozen=True)
class SuiteConfig:
    algebra: Algebra
    samples: int = 100
    seed: int = 0
    tol_exact: float = 1e-9
    tol_fd: float = 1e-4
    fd_step: float = 1e-4

    def __post_init__(self):
        if not isinstance(self.algebra, Algebra):
            raise ConfigError("algebra must be an Algebra")
        if int(self.samples) < 1:
            raise ConfigError("samples must be >= 1")
        for name in ("tol_exact", "tol_fd", "fd_step"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise ConfigError(f"{name} must be positive and finite")

    def as_dict(self) -> dict[str, Any]:
        return {
            "algebra": str(self.algebra),
            "samples": int(self.samples),
            "seed": int(self.seed),
            "tol_exact": self.tol_exact,
            "tol_fd": self.tol_fd,
            "fd_step": self.fd_step,
        }


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    samples: int
    max_error: float
    tolerance: float
    passed: bool
    metadata: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {
            "check_name": self.check_name,
            "samples": self.samples,
            "max_error": _json_float(self.max_error),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "metadata": self.metadata,
        }


def _json_float(x: float):
    return float(x) if math.isfinite(x) else None


# -- check registry --------------------------------------------------------------------------

Sample = Callable[["Context", np.random.Generator], Any]
Finalize = Callable[[list], tuple[float, dict]]


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    tolerance: Callable[[SuiteConfig], float]
    run: Sample
    finalize: Finalize | None = None


@dataclass(frozen=True)
class Context:
    config: SuiteConfig
    algebra: Algebra

    @property
    def h(self) -> float:
        return self.config.fd_step

    @property
    def nu(self) -> Valuation:
        return Valuation.default(self.algebra)


REGISTRY: list[Check] = []


def check(name: str, suite: str, tolerance: Callable[[SuiteConfig], float] | float,
          finalize: Finalize | None = None):
    tol = tolerance if callable(tolerance) else (lambda cfg, t=tolerance: t)

    def deco(fn: Sample) -> Sample:
        REGISTRY.append(Check(name, suite, tol, fn, finalize))
        return fn
    return deco


EXACT = lambda cfg: cfg.tol_exact  # noqa: E731
FD = lambda cfg: cfg.tol_fd  # noqa: E731


def _point(ctx: Context, rng) -> ProjectionPoint:
    return sample_point(ctx.algebra, rng, rng.uniform(0.1, 1.5))


def _dist(a: np.ndarray, b) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b), 2))


# -- algebraic -------------------------------------------------------------------------------


@check("c_star_identity", "algebraic", EXACT)
def _c_star(ctx, rng):
    a = sample(ctx.algebra, rng) * rng.uniform(0.1, 3.0)
    n2 = op_norm(a) ** 2
    return abs(op_norm(a.adj @ a) - n2) / n2


@check("functional_calculus", "algebraic", EXACT)
def _funcalc(ctx, rng):
    a = sample(ctx.algebra, rng, "positive")
    r = fun_calc(a, "sqrt")
    ri = fun_calc(a, "inv_sqrt")
    inv = fun_calc(a, "inverse")
    one = ctx.algebra.identity()
    scale = op_norm(a)
    return max(op_norm(r @ r - a) / scale, op_norm(ri @ r - one),
               op_norm(inv @ a - one), op_norm(r.commutator(a)) / scale)


@check("valuation_trace_positivity", "algebraic", 1e-12)
def _valuation(ctx, rng):
    nu = ctx.nu
    a, b = sample(ctx.algebra, rng), sample(ctx.algebra, rng)
    p = sample(ctx.algebra, rng, "positive")
    tr = op_norm(valuate(nu, a @ b) - valuate(nu, b @ a))
    vals = np.diag(valuate(nu, p).rep)
    neg = max(0.0, -float(np.min(vals.real))) + float(np.max(np.abs(vals.imag)))
    return max(tr, neg)


@check("theta_hermitian_symmetry", "algebraic", 1e-12)
def _theta_sym(ctx, rng):
    x, y = sample_vector(ctx.algebra, rng), sample_vector(ctx.algebra, rng)
    c = complex(rng.standard_normal(), rng.standard_normal())
    herm = op_norm(theta(y, x) - theta(x, y).adj)
    lin = op_norm(theta(x, y * c) - theta(x, y) * c) + op_norm(theta(x * c, y) - theta(x, y) * np.conj(c))
    return max(herm, lin)


@check("group_exponential", "algebraic", 1e-9)
def _group_exp(ctx, rng):
    a = sample_lie(ctx.algebra, rng)
    t = rng.uniform(-2.0, 2.0)
    s = rng.uniform(-1.0, 1.0)
    m = exp_to_group(a, t)
    flow = _dist(exp_to_group(a, s + t).rep, exp_to_group(a, s).rep @ m.rep)
    return max(group_defect(m.m), flow)


@check("projection_structure", "algebraic", EXACT)
def _structure(ctx, rng):
    b = sample(ctx.algebra, rng) * rng.uniform(0.1, 1.5)
    q = q_from_b(b)
    lam = q.lam.rep
    s = ctx.algebra.size
    rho = np.diag(np.r_[np.ones(s), -np.ones(s)])
    p = np.diag(np.r_[np.ones(s), np.zeros(s)])
    sc = op_norm(b) ** 2 + 1
    errs = [
        _dist(q.rep @ q.rep, q.rep) / sc**2,
        _dist(sharp_rep(q.rep), q.rep) / sc,
        _dist(lam @ rho @ lam, rho) / sc,
        _dist(lam @ p @ np.linalg.inv(lam), q.rep) / sc,
        proj_from_sphere(q.sr).dist(q) / sc,
    ]
    return max(errs)


@check("fiber_invariance", "algebraic", 1e-12)
def _fiber(ctx, rng):
    x = sample_sphere(ctx.algebra, rng)
    u = sample(ctx.algebra, rng, "unitary")
    p1, p2 = proj_from_sphere(x), proj_from_sphere(x @ u)
    return p1.dist(p2) / max(1.0, p1.q.norm())


@check("lift_lemma", "algebraic", EXACT)
def _lift(ctx, rng):
    x = sample_sphere(ctx.algebra, rng, rng.uniform(0.1, 1.5))
    q = proj_from_sphere(x)
    X = sample_tangent(q, rng)
    v = lift_form(X, x)
    back = tangent_from_lift(x, v)
    sc = max(1.0, q.q.norm())
    return max(_dist(q.rep @ v.rep, 0) / sc, back.X.dist(X.X) / sc)


@check("action_equivariance", "algebraic", EXACT)
def _action(ctx, rng):
    x = sample_sphere(ctx.algebra, rng, rng.uniform(0.1, 1.0))
    m = sample_group(ctx.algebra, rng, rng.uniform(0.1, 1.0))
    lhs = act(m, proj_from_sphere(x))
    rhs = proj_from_sphere(act_sphere(m, x))
    return lhs.dist(rhs) / max(1.0, lhs.q.norm())


@check("basis_completion", "algebraic", EXACT)
def _basis(ctx, rng):
    x = sample_sphere(ctx.algebra, rng, rng.uniform(0.1, 1.0))
    y, z = basis_completion(x)
    one = ctx.algebra.identity()
    px = proj_from_sphere(x).rep
    sc = max(1.0, x.x.norm()) ** 2
    return max(
        op_norm(theta(y, y) - one), op_norm(theta(z, z) + one), op_norm(theta(y, z)),
        _dist(px @ y.rep, y.rep) / sc, _dist(px @ z.rep, 0) / sc,
    )


@check("disk_coordinates", "algebraic", EXACT)
def _disk(ctx, rng):
    z = sample(ctx.algebra, rng, "contraction", r=rng.uniform(0.05, 0.9))
    a = sample(ctx.algebra, rng)
    T = disk_tangent(z, a)
    return max(op_norm(disk_coords(disk_point(z)) - z), op_norm(disk_velocity(T) - a) / max(1.0, op_norm(a)))


@check("complex_structure_square", "algebraic", 1e-10)
def _cs_square(ctx, rng):
    q = _point(ctx, rng)
    X = sample_tangent(q, rng)
    return complex_structure(complex_structure(X)).X.dist(-X.X)


@check("hilbertian_compatibility", "algebraic", 1e-10)
def _compat(ctx, rng):
    q = _point(ctx, rng)
    X, Y = sample_tangent(q, rng), sample_tangent(q, rng)
    iX, iY = complex_structure(X), complex_structure(Y)
    h = hilbertian_product(X, Y).matrix
    a = hilbertian_product(iX, Y).matrix
    b = hilbertian_product(X, iY).matrix
    return max(op_norm(a + b), op_norm(b - h * 1j))


@check("hilbertian_positivity", "algebraic", 1e-10)
def _positivity(ctx, rng):
    q = _point(ctx, rng)
    X = sample_tangent(q, rng)
    w = np.linalg.eigvalsh(hilbertian_product(X, X).matrix.hermitian_part().rep)
    return max(0.0, -float(w.min()))


@check("basis_independence", "algebraic", 1e-10)
def _basis_indep(ctx, rng):
    q = _point(ctx, rng)
    X, Y = sample_tangent(q, rng), sample_tangent(q, rng)
    u = sample(ctx.algebra, rng, "unitary")
    xu = q.sr @ u
    R1 = curvature(X, Y).canonical_form()
    R2 = curvature(X, Y, xu).canonical_form()
    H1 = hilbertian_product(X, Y).value.canonical_form()
    H2 = hilbertian_product(X, Y, xu).value.canonical_form()
    return max(op_norm(R1.matrix - R2.matrix), op_norm(H1.matrix - H2.matrix))


@check("prequantization", "algebraic", EXACT)
def _preq(ctx, rng):
    q = _point(ctx, rng)
    X, Y = sample_tangent(q, rng), sample_tangent(q, rng)
    R = curvature(X, Y).matrix
    anti = op_norm(R + curvature(Y, X).matrix)
    return max(op_norm(R * 0.5j - symplectic_form(X, Y).matrix), anti)


@check("finsler_invariance", "algebraic", 1e-8)
def _finsler_inv(ctx, rng):
    q = _point(ctx, rng)
    X = sample_tangent(q, rng)
    m = sample_group(ctx.algebra, rng, rng.uniform(0.1, 1.0))
    return abs(finsler_norm(act_tangent(m, X)) - finsler_norm(X))


def _finsler_link_finalize(results):
    errs = [r[0] for r in results]
    unsq = [r[1] for r in results]
    return max(errs), {"unsquared_relation_max_error": max(unsq)}


@check("finsler_norm_link", "algebraic", 1e-8, _finsler_link_finalize)
def _finsler_link(ctx, rng):
    q = _point(ctx, rng)
    X = sample_tangent(q, rng) * rng.uniform(0.2, 3.0)
    f = finsler_norm(X)
    e = endo_norm(hilbertian_product(X, X).value)
    return abs(f**2 - e) / max(e, 1e-300), abs(f - e)


# -- differential ----------------------------------------------------------------------------


def _poly(ctx, rng, degree: int = 2) -> AlgebraPolynomial:
    return AlgebraPolynomial(tuple(sample(ctx.algebra, rng) for _ in range(degree + 1)))


@check("tautological_derivative_fd", "differential", FD)
def _taut(ctx, rng):
    q = _point(ctx, rng)
    X = sample_tangent(q, rng)
    curve = orbit_curve(X, _poly(ctx, rng))
    t0 = rng.uniform(-0.3, 0.3)
    return (taut_derivative(curve, t0) - taut_derivative_fd(curve, t0, ctx.h)).norm()


@check("leibniz_rule", "differential", FD)
def _leibniz(ctx, rng):
    q = _point(ctx, rng)
    X = sample_tangent(q, rng)
    curve = orbit_curve(X, _poly(ctx, rng))
    return leibniz_defect(curve, _poly(ctx, rng, 1), rng.uniform(-0.3, 0.3), ctx.h)


@check("curvature_fd_oracle", "differential", FD)
def _curv_fd(ctx, rng):
    q = _point(ctx, rng)
    X, Y = sample_tangent(q, rng), sample_tangent(q, rng)
    return curvature_fd_oracle(X, Y, h=ctx.h).dist(curvature(X, Y))


@check("disk_tangent_fd", "differential", FD)
def _disk_fd(ctx, rng):
    z = sample(ctx.algebra, rng, "contraction", r=rng.uniform(0.05, 0.8))
    a = sample(ctx.algebra, rng)
    h = ctx.h

    def diff(k):
        return (disk_point(z + a * k).rep - disk_point(z - a * k).rep) / (2 * k)

    fd = (4 * diff(h / 2) - diff(h)) / 3
    return _dist(fd, disk_tangent(z, a).rep)


@check("manifold_connection_tangency", "differential", lambda cfg: cfg.tol_fd / 100)
def _conn_tangent(ctx, rng):
    q = _point(ctx, rng)
    Y = sample_tangent(q, rng)
    M = sample_matrix(ctx.algebra, rng)
    V = DoubledMatrix(ctx.algebra, (M.rep + sharp_rep(M.rep)) / 2)
    W = manifold_connection(lambda qq: tangent_projection(qq, V), Y, h=ctx.h, tol=np.inf)
    w, qr = W.rep, q.rep
    sc = max(1.0, np.linalg.norm(w, 2)) * max(1.0, np.linalg.norm(qr, 2))
    return max(_dist(sharp_rep(w), w), _dist(w @ qr + qr @ w, w)) / sc


# -- scalar oracle ---------------------------------------------------------------------------


def _scalar_ctx(ctx: Context) -> tuple[Algebra, int]:
    """Algebra used for the classical comparison and its number of components."""
    if ctx.algebra.kind == "commutative":
        return ctx.algebra, ctx.algebra.dim
    return Algebra.scalar(), 1


def _disk_sample(rng, k: int, r: float = 0.9) -> np.ndarray:
    rad = r * np.sqrt(rng.uniform(0, 1, k))
    return rad * np.exp(2j * np.pi * rng.uniform(0, 1, k))


def _cplx(rng, k: int) -> np.ndarray:
    return rng.standard_normal(k) + 1j * rng.standard_normal(k)


def _fixed_values() -> dict:
    S = Algebra.scalar()
    one = S.element(1)
    half = hilbertian_product(disk_tangent(S.element(0.5), one), disk_tangent(S.element(0.5), one))
    lie = LieElement(S.element(0.6j), S.element(-0.4j), S.element(0.3))
    f0 = moment_map(lie, ProjectionPoint.base(S)).matrix.data
    return {
        "metric_at_half": complex(half.matrix.data).real,
        "metric_at_half_error": abs(half.matrix.data - 16 / 9),
        "moment_at_origin_error": abs(f0 - 0.3),
    }


def _metric_finalize(results):
    fixed = _fixed_values()
    err = max(max(results), fixed["metric_at_half_error"])
    return err, {"metric_at_half": fixed["metric_at_half"]}


@check("scalar_hilbertian_product", "scalar_oracle", 1e-10, _metric_finalize)
def _scalar_metric(ctx, rng):
    A, k = _scalar_ctx(ctx)
    z, a, b = _disk_sample(rng, k), _cplx(rng, k), _cplx(rng, k)
    el = A.element
    got = np.diag(hilbertian_product(disk_tangent(el(z), el(a)), disk_tangent(el(z), el(b))).matrix.rep)
    ref = np.array([poincare_metric(z[i], a[i], b[i]) for i in range(k)])
    return float(np.max(np.abs(got - ref) / np.maximum(1.0, np.abs(ref))))


@check("scalar_connection", "scalar_oracle", 1e-6)
def _scalar_conn(ctx, rng):
    A, k = _scalar_ctx(ctx)
    fields = [PolyField.from_array(_cplx(rng, 9).reshape(3, 3) * 0.5) for _ in range(k)]
    b = _cplx(rng, k)
    el = A.element

    def field(qq):
        zc = np.diag(disk_coords(qq).rep)
        vals = np.array([fields[i](zc[i]) for i in range(k)])
        return disk_tangent(el(zc), el(vals))

    Y = disk_tangent(A.zero(), el(b))
    got = np.diag(disk_velocity(manifold_connection(field, Y, h=1e-3)).rep)
    ref = np.array([scalar_connection(fields[i], b[i]) for i in range(k)])
    return float(np.max(np.abs(got - ref)))


def _moment_finalize(results):
    fixed = _fixed_values()
    return max(max(results), fixed["moment_at_origin_error"]), {
        "moment_at_origin_error": fixed["moment_at_origin_error"],
        "offdiagonal_convention": "w is the (1,2) entry; the (2,1) entry is conj(w)",
    }


@check("scalar_moment", "scalar_oracle", 1e-10, _moment_finalize)
def _scalar_mom(ctx, rng):
    A, k = _scalar_ctx(ctx)
    z = _disk_sample(rng, k)
    al, be = rng.standard_normal(k), rng.standard_normal(k)
    w = _cplx(rng, k)
    el = A.element
    lie = LieElement(el(1j * al), el(1j * be), el(np.conj(w)))
    got = np.diag(moment_map(lie, disk_point(el(z))).matrix.rep)
    ref = np.array([scalar_moment(z[i], al[i], be[i], w[i]) for i in range(k)])
    return float(np.max(np.abs(got - ref)))


# -- moment ----------------------------------------------------------------------------------


@check("moment_equivariance", "moment", EXACT)
def _mom_equiv(ctx, rng):
    q = _point(ctx, rng)
    a = sample_lie(ctx.algebra, rng)
    m = sample_group(ctx.algebra, rng, rng.uniform(0.1, 1.0))
    return moment_equivariance_defect(m, a, q)


@check("moment_gradient", "moment", FD)
def _mom_grad(ctx, rng):
    q = _point(ctx, rng)
    Y = sample_tangent(q, rng)
    lhs, rhs = moment_gradient_check(sample_lie(ctx.algebra, rng), Y, ctx.h)
    return lhs.dist(rhs)


def _poisson_finalize(results):
    return max(r[0] for r in results), {
        "consistent_identity_max_error": max(r[1] for r in results),
        "consistent_identity": "omega(X_a, X_b) = f_[a,b] - 2i [f_a, f_b]",
    }


@check("poisson_relation", "moment", EXACT, _poisson_finalize)
def _poisson(ctx, rng):
    q = _point(ctx, rng)
    a, b = sample_lie(ctx.algebra, rng), sample_lie(ctx.algebra, rng)
    return (op_norm(poisson_defect(a, b, q).matrix),
            op_norm(poisson_identity_defect(a, b, q).matrix))


@check("poisson_identity_consistent", "moment", EXACT)
def _poisson_ok(ctx, rng):
    q = _point(ctx, rng)
    a, b = sample_lie(ctx.algebra, rng), sample_lie(ctx.algebra, rng)
    return op_norm(poisson_identity_defect(a, b, q).matrix)


def _constant_finalize(results):
    ratios = np.concatenate([np.atleast_1d(r) for r in results])
    ref = ratios[0]
    spread = float(np.max(np.abs(ratios - ref)) / abs(ref))
    return spread, {"constant_re": float(ref.real), "constant_im": float(ref.imag)}


@check("valuated_moment_constant", "moment", 1e-8, _constant_finalize)
def _mom_ratio(ctx, rng):
    q = _point(ctx, rng)
    a = sample_lie(ctx.algebra, rng)
    f = np.diag(valuated_moment(ctx.nu, a, q).rep)
    t = np.diag(tau_moment(ctx.nu, a, q).rep)
    return f / t


@check("restricted_image", "moment", 1e-10)
def _restricted(ctx, rng):
    q = _point(ctx, rng)
    p = restricted_image(q)
    w = np.linalg.eigvalsh(p.c1.hermitian_part().rep)
    nu = ctx.nu
    agree = op_norm(valuate(nu, p.c1) - valuate(nu, q.q.m11))
    total = op_norm(valuate(nu, q.q.m11 + q.q.m22) - 1)
    return max(op_norm(p.c1 + p.c2 - 1), max(0.0, 1 - float(w.min())), agree, total)


@check("convexity_witness", "moment", EXACT)
def _convexity(ctx, rng):
    qa, qb = _point(ctx, rng), _point(ctx, rng)
    pa, pb = restricted_image(qa), restricted_image(qb)
    return max(witness_defect(pa, pb, t) for t in (0.0, 0.25, 0.5, 0.75, 1.0))


# -- half-space ------------------------------------------------------------------------------


@check("mobius_roundtrip", "halfspace", EXACT)
def _mobius(ctx, rng):
    h = sample_halfspace(ctx.algebra, rng)
    z = sample(ctx.algebra, rng, "contraction", r=rng.uniform(0.05, 0.9))
    e1 = op_norm(mobius_to_halfspace(mobius_to_disk(h)).zeta - h.zeta) / max(1.0, op_norm(h.zeta))
    e2 = op_norm(mobius_to_disk(mobius_to_halfspace(z)) - z)
    return max(e1, e2)


@check("cayley_intertwining", "halfspace", 1e-10)
def _cayley(ctx, rng):
    x, y = sample_vector(ctx.algebra, rng), sample_vector(ctx.algebra, rng)
    s = sample_sphere(ctx.algebra, rng, 0.8)
    ux = to_halfspace_vector(s.x)
    e = op_norm(theta_h(to_halfspace_vector(x), to_halfspace_vector(y)) - theta(x, y))
    return max(e, op_norm(theta_h(ux, ux) - 1))


@check("orthogonal_complement", "halfspace", 1e-10)
def _perp(ctx, rng):
    h = sample_halfspace(ctx.algebra, rng)
    x = halfspace_section(h)
    xp = x_perp(x)
    one = ctx.algebra.identity()
    fib = op_norm(x.x2 @ x.x1.inv() - h.zeta)
    return max(op_norm(theta_h(xp, xp) + one), op_norm(theta_h(x, xp)), op_norm(theta_h(x, x) - one), fib)


@check("halfspace_lift_nullspace", "halfspace", EXACT)
def _hlift(ctx, rng):
    h = sample_halfspace(ctx.algebra, rng)
    v = sample_half_tangent(h, rng)
    x = halfspace_section(h)
    k = halfspace_lift(h, v)
    return _dist(halfspace_projection(x).rep @ k.rep, 0)


@check("liouville_derivative_fd", "halfspace", lambda cfg: cfg.tol_fd / 10)
def _dalpha(ctx, rng):
    h = sample_halfspace(ctx.algebra, rng)
    v, w = sample_half_tangent(h, rng), sample_half_tangent(h, rng)
    closed, fd = d_liouville_fd(ctx.nu, h, v, w, ctx.h)
    return op_norm(closed - fd)


def _dalpha_sample(ctx, rng):
    h = sample_halfspace(ctx.algebra, rng)
    v, w = sample_half_tangent(h, rng), sample_half_tangent(h, rng)
    return h, v, w


@check("liouville_trace_constant", "halfspace", 1e-4, _constant_finalize)
def _dalpha_const(ctx, rng):
    h, v, w = _dalpha_sample(ctx, rng)
    closed, _ = d_liouville_fd(ctx.nu, h, v, w, ctx.h)
    im = np.diag(trace_product(ctx.nu, v, w).rep).imag
    return np.diag(closed.rep).real / im


@check("cross_model_constant", "halfspace", 1e-8, _constant_finalize)
def _cross(ctx, rng):
    h, v, w = _dalpha_sample(ctx, rng)
    z = mobius_to_disk(h)
    T1 = disk_tangent(z, mobius_derivative(h, v.v))
    T2 = disk_tangent(z, mobius_derivative(h, w.v))
    disk_val = np.diag(valuate(ctx.nu, hilbertian_product(T1, T2).matrix).rep)
    return disk_val / np.diag(trace_product(ctx.nu, v, w).rep)


@check("spd_invariance", "halfspace", EXACT)
def _spd(ctx, rng):
    y = sample(ctx.algebra, rng, "positive")
    x1, x2 = sample(ctx.algebra, rng, "hermitian"), sample(ctx.algebra, rng, "hermitian")
    g = sample(ctx.algebra, rng) + ctx.algebra.identity() * 1.5
    nu = ctx.nu
    a = spd_bracket(nu, y, x1, x2)
    b = spd_bracket(nu, spd_action(g, y), spd_action(g, x1), spd_action(g, x2))
    return op_norm(a - b) / max(1.0, op_norm(a))


@check("spd_quarter_relation", "halfspace", 1e-10)
def _quarter(ctx, rng):
    y = sample(ctx.algebra, rng, "positive")
    x1, x2 = sample(ctx.algebra, rng, "hermitian"), sample(ctx.algebra, rng, "hermitian")
    at = HalfSpacePoint(ctx.algebra.zero(), y)
    tp = trace_product(ctx.nu, HalfTangent(at, x1 * 1j), HalfTangent(at, x2 * 1j))
    return op_norm(tp + spd_bracket(ctx.nu, y, x1, x2) * 0.25)


# -- orchestration ---------------------------------------------------------------------------


def _threads() -> int:
    raw = os.environ.get("OPDISK_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ConfigError(f"OPDISK_THREADS must be an integer, got {raw!r}") from exc


def _salt(name: str) -> int:
    return zlib.crc32(name.encode())


def _error_of(result) -> float:
    err = result[0] if isinstance(result, tuple) else result
    err = float(np.max(np.abs(err)))
    return err if math.isfinite(err) else math.inf


def _run_check(chk: Check, config: SuiteConfig, pool: ThreadPoolExecutor | None) -> CheckReport:
    algebra = config.algebra
    if chk.suite == "scalar_oracle" and algebra.kind == "matrix":
        algebra = Algebra.scalar()
    ctx = Context(config, algebra)
    salt = _salt(chk.name)

    def one(i: int):
        rng = np.random.default_rng([config.seed & 0xFFFFFFFF, salt, i])
        try:
            with np.errstate(all="ignore"):
                return chk.run(ctx, rng)
        except (OpDiskError, np.linalg.LinAlgError, FloatingPointError) as exc:
            return _Failure(type(exc).__name__)

    idx = range(config.samples)
    results = list(pool.map(one, idx)) if pool else [one(i) for i in idx]
    failures = [r for r in results if isinstance(r, _Failure)]
    good = [r for r in results if not isinstance(r, _Failure)]
    meta: dict[str, Any] = {}
    if chk.finalize and good:
        with np.errstate(all="ignore"):
            max_error, meta = chk.finalize(good)
    else:
        max_error = max((_error_of(r) for r in good), default=math.inf)
    if failures:
        max_error = math.inf
        meta["exceptions"] = len(failures)
        meta["first_exception"] = failures[0].kind
    if not math.isfinite(max_error):
        max_error = math.inf
    tol = chk.tolerance(config)
    meta = {k: _plain(v) for k, v in meta.items()}
    return CheckReport(chk.name, config.samples, float(max_error), tol, bool(max_error <= tol), meta)


@dataclass(frozen=True)
class _Failure:
    kind: str


def _plain(v):
    if isinstance(v, (np.floating, float)):
        return _json_float(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def checks_for(suite: str) -> list[Check]:
    if suite == "all":
        return list(REGISTRY)
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}")
    return [c for c in REGISTRY if c.suite == suite]


def run_suite(config: SuiteConfig, suite: str = "all") -> list[CheckReport]:
    selected = checks_for(suite)
    n = _threads()
    if n == 1:
        return [_run_check(c, config, None) for c in selected]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return [_run_check(c, config, pool) for c in selected]


def all_passed(reports: Iterable[CheckReport]) -> bool:
    return all(r.passed for r in reports)


def report_json(config: SuiteConfig, suite: str, reports: list[CheckReport]) -> str:
    cfg = config.as_dict()
    cfg["suite"] = suite
    doc = {
        "schema": SCHEMA,
        "config": cfg,
        "checks": [r.as_dict() for r in reports],
        "all_passed": all_passed(reports),
    }
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


# -- moment image CSV --------------------------------------------------------------------------

WITNESS_TS = (0.0, 0.25, 0.5, 0.75, 1.0)


def _direction(algebra: Algebra, seed: int, j: int) -> AlgebraElement:
    if algebra.kind == "scalar":
        return algebra.identity()
    d = sample(algebra, np.random.default_rng([seed & 0xFFFFFFFF, _salt("direction"), j]))
    return d * (1 / op_norm(d))


def sample_moment_image(config: SuiteConfig, grid: int) -> list[dict[str, Any]]:
    """Image points on a polar grid of |z| <= 0.9 plus convexity-witness rows."""
    if grid < 2:
        raise ConfigError("grid must be >= 2")
    alg = config.algebra
    nu = Valuation.default(alg)
    tol = config.tol_exact
    rows: list[dict[str, Any]] = []
    points = []

    def emit(kind: str, t, p, ok: bool):
        rows.append({
            "sample_id": len(rows), "kind": kind, "t": t,
            "nu_c1": np.diag(valuate(nu, p.c1).rep), "nu_c2": np.diag(valuate(nu, p.c2).rep),
            "certificate_pass": bool(ok),
        })

    radii = np.linspace(0.0, 0.9, grid)
    for i, r in enumerate(radii):
        for j in range(1 if i == 0 else grid):
            phase = np.exp(2j * np.pi * j / grid)
            z = _direction(alg, config.seed, j) * (r * phase)
            p = restricted_image(disk_point(z))
            c1_min = float(np.linalg.eigvalsh(p.c1.hermitian_part().rep).min())
            ok = (op_norm(p.c1 + p.c2 - 1) <= tol and c1_min >= 1 - 1e-10
                  and witness_defect(p, p, 1.0) <= tol)
            points.append(p)
            emit("point", "", p, ok)

    rng = np.random.default_rng([config.seed & 0xFFFFFFFF, _salt("witness")])
    for _ in range(grid):
        ia, ib = rng.integers(len(points), size=2)
        for t in WITNESS_TS:
            _, chk = convexity_witness(points[ia], points[ib], t)
            emit("witness", t, chk, witness_defect(points[ia], points[ib], t) <= tol)
    return rows


def moment_image_csv(rows: list[dict[str, Any]]) -> str:
    k = len(rows[0]["nu_c1"]) if rows else 1
    header = ["sample_id", "kind", "t"]
    for name in ("nu_c1", "nu_c2"):
        for c in range(k):
            header += [f"{name}_{c}_re", f"{name}_{c}_im"]
    header.append("certificate_pass")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        out = [row["sample_id"], row["kind"], row["t"]]
        for name in ("nu_c1", "nu_c2"):
            for v in row[name]:
                out += [repr(float(v.real)), repr(float(v.imag))]
        out.append("true" if row["certificate_pass"] else "false")
        w.writerow(out)
    return buf.getvalue()
