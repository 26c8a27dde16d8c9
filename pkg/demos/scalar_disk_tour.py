"""Walk across the classical disk and compare the operator machinery with closed forms."""
import numpy as np

from opdisk import Algebra
from opdisk.classical_oracle import poincare_metric
from opdisk.disk_space import disk_point, disk_tangent
from opdisk.kahler import finsler_norm, hilbertian_product

S = Algebra.scalar()
one = S.element(1)

print(f"{'|z|':>6} {'<1,1>_z':>14} {'closed form':>14} {'finsler':>10}")
for r in np.linspace(0.0, 0.95, 8):
    z = S.element(r)
    X = disk_tangent(z, one)
    h = hilbertian_product(X, X).matrix.data.real
    print(f"{r:6.3f} {h:14.6f} {poincare_metric(r, 1, 1).real:14.6f} {finsler_norm(X):10.6f}")

# the projection picture of a single disk point
q = disk_point(S.element(0.5 + 0.25j))
print("\nprojection q for z = 0.5 + 0.25i:")
print(np.array2string(q.rep, precision=4, suppress_small=True))
print("q^2 - q =", f"{np.linalg.norm(q.rep @ q.rep - q.rep):.2e}")
