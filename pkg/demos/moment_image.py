"""Restricted moment image: sampled points, convex combinations and their preimages."""
import numpy as np

from opdisk import Algebra
from opdisk.algebra import op_norm, sample
from opdisk.disk_space import disk_point
from opdisk.moment import convexity_witness, restricted_image, witness_defect

for alg in (Algebra.scalar(), Algebra.matrix(3)):
    rng = np.random.default_rng(10)
    pts = [restricted_image(disk_point(sample(alg, rng, "contraction", r=0.85))) for _ in range(6)]
    print(f"\n{alg}: min eigenvalue of c1 over samples =",
          f"{min(np.linalg.eigvalsh(p.c1.rep).min() for p in pts):.4f}")
    for t in (0.0, 0.3, 0.7, 1.0):
        z, chk = convexity_witness(pts[0], pts[1], t)
        print(f"  t = {t:.1f}: witness |z| = {op_norm(z):.4f}, defect = {witness_defect(pts[0], pts[1], t):.2e}")
