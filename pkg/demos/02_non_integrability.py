"""Two independent witnesses that the torus structure on R^4 is not integrable.

The Nijenhuis tensor is computed exactly from dJ, and again from finite
differences of J; the (0,2) part of d(alpha_1) must equal a quarter of
alpha_1 applied to N.  The standard structure gives zero for both.
"""

import numpy as np

from almostcomplex.acs import Coframe, j_at, max_nijenhuis_norm, nijenhuis_fd, nijenhuis_tensor, split_d
from almostcomplex.constructions import torus_coframe

C = torus_coframe()
p = np.array([1.0, 0.0, 1.0, 0.0])

N = nijenhuis_tensor(C, p)
N_fd = nijenhuis_fd(lambda q: j_at(C, q).J, p)
print(f"max |N(e_a, e_b)| at {p.tolist()}: exact {max_nijenhuis_norm(N):.12f}, "
      f"finite differences {max_nijenhuis_norm(N_fd):.12f}")
for a in range(4):
    for b in range(a + 1, 4):
        print(f"   N(e{a + 1}, e{b + 1}) = {np.round(N[:, a, b], 12)}")

s = split_d(C, C.forms[0], p, bidegree=(1, 0))
alpha = C.forms[0].at(p).components()
gap = max(abs(s.abar[(a, b)] - 0.25 * alpha @ N[:, a, b]) for a in range(4) for b in range(a + 1, 4))
print(f"\n|Abar part of d(alpha_1)| = {s.abar.norm():.6f}; deviation from alpha_1(N)/4: {gap:.1e}")

std = Coframe.standard(2)
print(f"standard structure: max |N| = {max_nijenhuis_norm(nijenhuis_tensor(std, p))}")
print("A nonzero N witnesses non-integrability at the point; small values elsewhere prove nothing.")
