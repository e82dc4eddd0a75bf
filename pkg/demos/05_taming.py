"""No exact form tames the torus structure along the embedded torus.

For omega = dx1 ^ dx2 + dx3 ^ dx4 = d(theta) the integral over the closed
torus vanishes by Stokes, and the taming margin omega(t, J t) on its
tangent planes is identically zero.  For the standard structure the torus is
not pseudo-holomorphic and the certificate is refused.
"""

from almostcomplex.acs import Coframe
from almostcomplex.constructions import torus_coframe, torus_embedding
from almostcomplex.scenarios import standard_omega, standard_theta
from almostcomplex.tame import non_tameability_certificate, stokes_witness

S = torus_embedding()
omega, theta = standard_omega(4), standard_theta(4)

st = stokes_witness(theta, S)
print(f"Stokes: integral of d(theta) over the torus {abs(st.integral):.1e} (relative {st.relative:.1e})\n")

for label, C in (("torus structure", torus_coframe()), ("standard structure", Coframe.standard(2))):
    cert = non_tameability_certificate(C, S, omega, theta)
    r = cert.report
    print(f"{label}: {cert.status}")
    print(f"   margin in [{r.margin_min:.2e}, {r.margin_max:.2e}], tangent invariance defect {r.invariance_max:.1e}")
    for clause in cert.clauses:
        print(f"   {clause}")
    print(f"   => {cert.text}\n")
