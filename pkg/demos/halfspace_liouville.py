"""Half-space model: Moebius round trip and the Liouville two-form against the trace product."""
import numpy as np

from opdisk import Algebra
from opdisk.algebra import Valuation, op_norm
from opdisk.halfspace import (
    d_liouville_fd,
    mobius_to_disk,
    mobius_to_halfspace,
    sample_half_tangent,
    sample_halfspace,
    trace_product,
)

alg = Algebra.matrix(2)
nu = Valuation.default(alg)
rng = np.random.default_rng(5)

for _ in range(4):
    h = sample_halfspace(alg, rng)
    v, w = sample_half_tangent(h, rng), sample_half_tangent(h, rng)
    z = mobius_to_disk(h)
    back = op_norm(mobius_to_halfspace(z).zeta - h.zeta)
    closed, fd = d_liouville_fd(nu, h, v, w)
    im = trace_product(nu, v, w).data.imag
    print(f"|z| = {op_norm(z):.3f}  roundtrip {back:.1e}  d alpha = {closed.data.real:+.5f} "
          f"(fd {fd.data.real:+.5f})  ratio to Im = {closed.data.real / im:+.6f}")
