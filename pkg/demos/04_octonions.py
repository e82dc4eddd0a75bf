"""The octonionic structure on S^6 and a pseudo-holomorphic CP^1.

J_p v = p v on the unit imaginary octonions.  The unit sphere of the
quaternion subalgebra span(e1, e2, e3) has J-invariant tangent planes; the
sphere in span(e1, e2, e4) does not.  Stereographic projection from e4 keeps
the invariance and yields a non-integrable structure on R^6.
"""

import numpy as np

from almostcomplex.acs import max_nijenhuis_norm, nijenhuis_fd
from almostcomplex.constructions import cp1_in_s6, s6_acs, stereographic_pushforward, table_csv

print("multiplication table (row e_i, column e_j holds e_i e_j):")
print(table_csv())
e = np.eye(8)
print(f"J_e1 e2 = {s6_acs(e[1], e[2]).astype(int)}, J_e1 e4 = {s6_acs(e[1], e[4]).astype(int)}")

print(f"\nCP^1 in span(e1, e2, e3): max tangent invariance defect {cp1_in_s6(500).max_defect:.1e}")
print(f"control span(e1, e2, e4): max defect {cp1_in_s6(500, plane=(1, 2, 4)).max_defect:.3f}")

st = stereographic_pushforward(pole=4)
print(f"after projection from e4: max defect {st.surface_defects(N=500).max():.1e}")
q0 = np.array([0.3, -0.2, 0.5, 0.1, 0.4, -0.3])
print(f"max |N| of the pushed structure at q0 = {q0.tolist()}: {max_nijenhuis_norm(nijenhuis_fd(st.J, q0)):.4f}")
