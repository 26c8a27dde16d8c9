"""Curvature of the tautological connection against its symplectic form, in M_3."""
import numpy as np

from opdisk import Algebra
from opdisk.algebra import op_norm
from opdisk.bundles import curvature, curvature_fd_oracle
from opdisk.disk_space import sample_point, sample_tangent
from opdisk.kahler import symplectic_form

M3 = Algebra.matrix(3)
rng = np.random.default_rng(3)

for trial in range(5):
    q = sample_point(M3, rng)
    X, Y = sample_tangent(q, rng), sample_tangent(q, rng)
    R = curvature(X, Y)
    fd = curvature_fd_oracle(X, Y)
    om = symplectic_form(X, Y).matrix
    print(f"trial {trial}: |R - R_fd| = {R.dist(fd):.2e}   "
          f"|(i/2)R - omega| = {op_norm(R.matrix * 0.5j - om):.2e}   |omega| = {op_norm(om):.3f}")
