"""Embedding an almost complex torus pseudo-holomorphically into R^4n.

A TauSpec prescribes zeta_i = sum tau_ij dzeta_j + tau_bar_ij dzetabar_j on
the torus.  The coframe {alpha_i^tau, beta_i^tau} on R^4n must pull back to
zeta_i along the product embedding, and the embedded torus must have
J_Lambda-invariant tangent planes.
"""

import numpy as np

from almostcomplex.acs import invariance_defect, j_at
from almostcomplex.constructions import build_j_lambda, jlambda_pullback_errors, product_torus
from almostcomplex.scenarios import GRID_PHASE, jlambda_test_specs
from almostcomplex.surface import periodic_grid

for name, t in jlambda_test_specs().items():
    C = build_j_lambda(t)
    grid = periodic_grid(16 if t.n == 1 else 4, 2 * t.n) + GRID_PHASE
    errs = jlambda_pullback_errors(t, C, grid)
    S = product_torus(t.n)
    inv = max(invariance_defect(j_at(C, S.position(a)).J, S.jacobian(a)) for a in grid[::8])
    print(f"{name:12s} tau_bar = {t.tau_bar}")
    print(f"{'':12s} pullback error alpha {errs['alpha']:.1e}, beta {errs['beta']:.1e} "
          f"({errs['samples']} samples); tangent invariance {inv:.1e}")
