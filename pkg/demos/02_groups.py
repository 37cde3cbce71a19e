"""Symplectic and split-orthogonal groups over a coefficient algebra.

Sp2(A, sigma) consists of 2x2 block matrices over A preserving the
standard symplectic form; O11(A, sigma) preserves the split Hermitian
form.  Both come with Lie algebras, a Cartan decomposition, and compact
subgroups stabilizing the base points of the symmetric spaces.
"""

import numpy as np

from symspaces import algebra as al
from symspaces import groups as gr
from symspaces import models as md

rng = np.random.default_rng(1)
spec = al.make_spec(2)

print("== sampling and membership ==")
for fam in (gr.Family.SP2, gr.Family.O11, gr.Family.AX_HAT, gr.Family.OC_HAT):
    gid = gr.GroupId(fam, spec)
    g = gr.sample_group(gid, rng)
    print(f"  {fam.value}: worst defining residual "
          f"{max(gr.group_residuals(gid, g).values()):.2e}")

print()
print("== closure and inverses ==")
gid = gr.GroupId(gr.Family.SP2, spec)
g, h = gr.sample_group(gid, rng), gr.sample_group(gid, rng)
print("product stays in the group:",
      max(gr.group_residuals(gid, al.mul(g, h)).values()))
print("inverse stays in the group:",
      max(gr.group_residuals(gid, al.inv(g)).values()))

print()
print("== Cartan decomposition: [k,k] in k, [k,m] in m, [m,m] in k ==")
x1, x2 = gr.sample_lie(gid, rng), gr.sample_lie(gid, rng)
k1, m1 = gr.cartan_project(gid, x1)
k2, m2 = gr.cartan_project(gid, x2)
brk = lambda a, b: al.mul(a, b) - al.mul(b, a)
print("  [k,k] m-part:", gr.cartan_project(gid, brk(k1, k2))[1].norm())
print("  [k,m] k-part:", gr.cartan_project(gid, brk(k1, m2))[0].norm())
print("  [m,m] m-part:", gr.cartan_project(gid, brk(m1, m2))[1].norm())

print()
print("== a fixed conjugation carries O11 over the conjugate-linear")
print("   complexification onto Sp2 (two faces of one group) ==")
scb = md.spec_c_bar(spec)
S = al.AlgebraElement(scb, gr.conjugator("S", spec).coeffs)
o11 = gr.GroupId(gr.Family.O11, scb)
sp2 = gr.GroupId(gr.Family.SP2, scb)
g = gr.sample_group(o11, rng)
conj = al.mul(al.mul(S, g), al.inv(S))
print("  image passes symplectic membership:",
      max(gr.group_residuals(sp2, conj).values()))

print()
print("== transporters: upper-triangular elements reaching any half-space point ==")
mid = md.ModelId(md.ModelFamily.SP2, md.Kind.U, spec, 1)
p = md.sample_point(mid, rng)
t = md.transporter_to(p)
moved = md.act(t.mat, md.basepoint(mid))
print("  transporter moves base point to target:",
      (moved.value - p.value).norm())
