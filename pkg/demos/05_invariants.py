"""Higgs data, congruence, spectral invariants, and rank-two recovery.

A Higgs datum is an algebra element with a fixed symmetry pattern acted
on by compacts through congruence k.q = k q sigma(k).  Its "norm value"
transforms by conjugation, so its characteristic polynomial gives a full
set of congruence invariants.  In the rank-two symplectic case the two
trace invariants recover the defining coefficients exactly.
"""

import numpy as np

from symspaces import algebra as al
from symspaces import hitchin as hi

rng = np.random.default_rng(4)
spec = al.make_spec(2)

print("== congruence changes the datum but not its invariants ==")
for fam in hi.HiggsFamily:
    pattern = "sym" if fam is hi.HiggsFamily.SP2C else "antisym"
    q = al.sample(hi.higgs_spec(fam, spec), pattern, rng)
    hv = hi.HiggsVector(fam, q)
    k = hi.sample_compact(fam, spec, rng)
    hv2 = hi.congruence(k, hv)
    i1 = np.array(hi.invariants(hv))
    i2 = np.array(hi.invariants(hv2))
    print(f"  {fam.value}: datum moved by {(hv2.q - hv.q).norm():.3f}, "
          f"invariant drift {np.max(np.abs(i1 - i2)):.2e}")

print()
print("== the norm value transforms by conjugation ==")
fam = hi.HiggsFamily.SP2C
q = al.sample(hi.higgs_spec(fam, spec), "sym", rng)
hv = hi.HiggsVector(fam, q)
k = hi.sample_compact(fam, spec, rng)
lhs = hi.norm_value(hi.congruence(k, hv))
rhs = al.mul(al.mul(k, hi.norm_value(hv)), al.inv(k))
print(f"  N(k.q) vs k N(q) k^-1: {(lhs - rhs).norm():.2e}")

print()
print("== scaling the datum scales the k-th invariant by t^(2k) ==")
t = 2.0
hv2 = hi.HiggsVector(fam, hv.q * t)
i1 = np.array(hi.invariants(hv))
i2 = np.array(hi.invariants(hv2))
powers = t ** (2 * np.arange(1, len(i1) + 1))
print(f"  drift: {np.max(np.abs(i2 - i1 * powers)):.2e}")

print()
print("== rank-two recovery: trace invariants determine (q2, q4) ==")
q2, q4 = 0.5, 0.25
beta, gamma, L = hi.hkr_sp4(q2, q4)
L2 = L @ L
print(f"  Tr L^2 = {np.trace(L2):.6f} (expect {4 * q2})")
print(f"  Tr L^4 = {np.trace(L2 @ L2):.6f} (expect {4 * (q2 ** 2 + q4)})")
r2, r4 = hi.hkr_recover(L)
print(f"  recovered (q2, q4) = ({r2:.12f}, {r4:.12f})")
