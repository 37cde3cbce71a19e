"""Coefficient algebras: towers of matrix algebras with an anti-involution.

Every object in this library lives over a "tower": square matrices over
the reals, complexes, or quaternions, optionally extended by a formal
complex or quaternionic unit, together with a chosen anti-involution
sigma.  This script builds a few towers and checks their basic calculus.
"""

import numpy as np

from symspaces import algebra as al

rng = np.random.default_rng(0)

print("== real 2x2 matrices with transpose ==")
spec = al.make_spec(2)
a = al.sample(spec, "free", rng)
b = al.sample(spec, "free", rng)
print("associativity residual:",
      (al.mul(al.mul(a, b), a) - al.mul(a, al.mul(b, a))).norm())
print("sigma(ab) = sigma(b) sigma(a) residual:",
      (al.apply_sigma(al.mul(a, b)) - al.mul(al.apply_sigma(b), al.apply_sigma(a))).norm())

print()
print("== complexified: adjoin a formal unit i with sigma(i) = -i ==")
cspec = al.extend(spec, "c", ext_signs=(-1,))
x = al.sample(cspec, "free", rng)
u, v = al.split(x, "i")
print("x = u + v*i recombines:",
      (al.lift(u, cspec) + al.unit_mul(al.lift(v, cspec), "i") - x).norm())

print()
print("== quaternionified: adjoin i and j with i*j = -j*i ==")
hspec = al.extend(spec, "h")
y = al.sample(hspec, "free", rng)
i_unit = al.scalar_unit(hspec, "i")
j_unit = al.scalar_unit(hspec, "j")
print("i*j + j*i = 0:", (al.mul(i_unit, j_unit) + al.mul(j_unit, i_unit)).norm())
print("theta_i is an involution:",
      (al.apply_theta(al.apply_theta(y, "i"), "i") - y).norm())

print()
print("== the complex matrix embedding is a faithful oracle ==")
for s in (spec, cspec, hspec):
    p = al.sample(s, "free", rng)
    q = al.sample(s, "free", rng)
    err = np.linalg.norm(
        al.embed_complex(al.mul(p, q)) - al.embed_complex(p) @ al.embed_complex(q))
    print(f"  {s.tower.ground}-ground, ext={s.tower.ext!r}: embedding residual {err:.2e}")

print()
print("== positive elements have principal square roots ==")
pos = al.sample(spec, "positive", rng)
root = al.sqrt_positive(pos)
print("sqrt(p)^2 = p residual:", (al.mul(root, root) - pos).norm())
