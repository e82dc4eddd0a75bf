"""Turning a normal field into a tangent field with the quaternionic structure.

At each point of the torus, J = A J1 A^-1 for a frame A built column by
column, and W = A J2 A^-1 V for the normal field V = 2(x1, x2, 0, 0).  The
tangency of W depends on the choice of A, so it is reported, not asserted.
"""

from almostcomplex.acs import Coframe
from almostcomplex.constructions import quaternion_frame_experiment, torus_coframe, torus_embedding

S = torus_embedding()
for label, C in (("torus structure", torus_coframe()), ("standard structure", Coframe.standard(2))):
    exp = quaternion_frame_experiment(C, S, grid=16)
    s = exp.samples[5]
    print(f"{label}:")
    print(f"   conjugacy defect <= {exp.max_conjugacy_defect:.1e}, min |W| = {exp.min_W_norm:.3f}")
    print(f"   tangency defect <= {exp.max_tangency_defect:.2e}, largest jumps between neighbours {exp.continuity()}")
    print(f"   sample at x = {s.point.round(3).tolist()}: W = {s.W.round(3).tolist()}")
