"""Four models of one symmetric space, and the conversions between them.

Each family (o11, ax, oc, sp2, sp2c) realizes its symmetric space four
ways: C, a space of fixed-point structures (complex/para-complex
structures, i.e. square roots of -1 or +1 compatible with the form);
P, a space of isotropic lines; U, a half-space chart; and B, a bounded
chart.  All conversions are equivariant bijections onto their images.
"""

import numpy as np

from symspaces import algebra as al
from symspaces import groups as gr
from symspaces import models as md
from symspaces import transforms as tf

rng = np.random.default_rng(2)
spec = al.make_spec(2)
KINDS = [md.Kind.C, md.Kind.P, md.Kind.U, md.Kind.B]


def mid(fam, kind, sign=1):
    return md.ModelId(fam, kind, spec, sign if kind in md._SIGNED_KINDS else 1)


print("== base points align across all four models ==")
for fam in (md.ModelFamily.O11, md.ModelFamily.SP2, md.ModelFamily.SP2C):
    b = md.basepoint(mid(fam, md.Kind.C))
    worst = 0.0
    for kind in KINDS[1:]:
        out = tf.convert(b, mid(fam, kind))
        ref = md.basepoint(mid(fam, kind))
        if kind is md.Kind.P:
            worst = max(worst, 0.0 if md.line_equal(out.value, ref.value) else 1.0)
        else:
            worst = max(worst, (out.value - ref.value).norm())
    print(f"  {fam.value}: worst base-point mismatch {worst:.2e}")

print()
print("== a round trip through every chart returns the same point ==")
fam = md.ModelFamily.SP2C
p = md.sample_point(mid(fam, md.Kind.U), rng)
cycle = p
for kind in (md.Kind.P, md.Kind.C, md.Kind.B, md.Kind.U):
    cycle = tf.convert(cycle, mid(fam, kind))
print(f"  U -> P -> C -> B -> U drift: {(cycle.value - p.value).norm():.2e}")

print()
print("== conversions commute with the group action ==")
g = gr.sample_group(md.group_for(mid(fam, md.Kind.U)), rng, scale=0.4)
lhs = tf.convert(md.act(g, p), mid(fam, md.Kind.B))
rhs = md.act(g, tf.convert(p, mid(fam, md.Kind.B)))
print(f"  convert(g.p) vs g.convert(p): {(lhs.value - rhs.value).norm():.2e}")

print()
print("== the fixed-point model: J^2 = -1 and a positivity condition ==")
pc = tf.convert(p, mid(fam, md.Kind.C))
J = pc.value
print("  membership residuals:", md.point_residuals(pc))

print()
print("== eigenlines: each fixed-point structure determines the line model ==")
line = tf.eigenline(pc, 1)
resid = tf._eigen_residual_fn(pc, 1)(line)
print(f"  eigenline residual: {resid.norm():.2e}")
pl = tf.convert(pc, mid(fam, md.Kind.P))
print("  exported line matches eigenline:", md.line_equal(pl.value, line))

print()
print("== both components: the sign distinguishes the two half spaces ==")
for sign in (1, -1):
    b = md.basepoint(mid(fam, md.Kind.U, sign))
    out = tf.convert(b, mid(fam, md.Kind.P, sign))
    ref = md.basepoint(mid(fam, md.Kind.P, sign))
    print(f"  sign {sign:+d}: line base point matches:",
          md.line_equal(out.value, ref.value))
