"""Symplectic and indefinite orthogonal groups over an involutive algebra.

Group elements are 2x2 block matrices over the algebra, stored as single
``(2n, 2n, d)`` coefficient arrays; the block transpose built into the
defining conditions is exactly the matrix part of the doubled algebra's
involution, so membership reduces to residuals of the form
``sigma(M) G M - G`` for a fixed Gram matrix ``G``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import algebra as al
from .algebra import AlgebraElement, AlgebraSpec
from .errors import NotHermitianPair, NotInGroup, NotInLieAlgebra, Unsupported


class Family(enum.Enum):
    SP2 = "sp2"
    O11 = "o11"
    O2 = "o2"
    O_ALG = "o_alg"
    AX_HAT = "ax_hat"
    OC_HAT = "oc_hat"
    KSP2 = "ksp2"
    KO11 = "ko11"
    KSP2C = "ksp2c"


@dataclass(frozen=True)
class GroupId:
    family: Family
    spec: AlgebraSpec


@dataclass
class GroupElement:
    gid: GroupId
    mat: AlgebraElement


@dataclass
class LieElement:
    gid: GroupId
    mat: AlgebraElement


# ----------------------------------------------------------------------
# block helpers


def blocks(m: AlgebraElement) -> tuple[AlgebraElement, ...]:
    n = m.shape[0] // 2
    c = m.coeffs
    return tuple(
        AlgebraElement(m.spec, c[r * n : (r + 1) * n, s * n : (s + 1) * n].copy())
        for r in (0, 1)
        for s in (0, 1)
    )


def assemble(spec: AlgebraSpec, a, b, c, d) -> AlgebraElement:
    n = a.shape[0]
    out = np.zeros((2 * n, 2 * n, spec.dim))
    for (r, s), blk in (((0, 0), a), ((0, 1), b), ((1, 0), c), ((1, 1), d)):
        out[r * n : (r + 1) * n, s * n : (s + 1) * n] = blk.coeffs
    return AlgebraElement(spec, out)


def stack_pair(x1: AlgebraElement, x2: AlgebraElement) -> AlgebraElement:
    """Column pair (x1; x2) as a (2n, n) element."""
    return AlgebraElement(x1.spec, np.concatenate([x1.coeffs, x2.coeffs], axis=0))


def pair(x: AlgebraElement) -> tuple[AlgebraElement, AlgebraElement]:
    n = x.shape[0] // 2
    return (
        AlgebraElement(x.spec, x.coeffs[:n].copy()),
        AlgebraElement(x.spec, x.coeffs[n:].copy()),
    )


def omega_gram(spec: AlgebraSpec, n: int | None = None) -> AlgebraElement:
    """[[0, 1], [-1, 0]] of size 2n."""
    n = spec.n if n is None else n
    z, e = al.zeros(spec, n), al.eye(spec, n)
    return assemble(spec, z, e, -e, z)


def hform_gram(spec: AlgebraSpec, n: int | None = None) -> AlgebraElement:
    """[[0, 1], [1, 0]] of size 2n."""
    n = spec.n if n is None else n
    z, e = al.zeros(spec, n), al.eye(spec, n)
    return assemble(spec, z, e, e, z)


def bdiag_gram(spec: AlgebraSpec, n: int | None = None) -> AlgebraElement:
    """diag(-1, 1) of size 2n."""
    n = spec.n if n is None else n
    z, e = al.zeros(spec, n), al.eye(spec, n)
    return assemble(spec, -e, z, z, e)


def _bar(a: AlgebraElement) -> AlgebraElement:
    """Conjugation of the central extension unit i."""
    return al.apply_theta(a, "i")


def _sigma_bar(a: AlgebraElement) -> AlgebraElement:
    """The conjugate-linear companion of the spec's involution (extension
    unit i additionally conjugated)."""
    return _bar(al.apply_sigma(a))


def hermitian_partner(spec: AlgebraSpec) -> AlgebraSpec:
    """A spec over the same tower whose involution is a *-involution,
    obtained by flipping extension-generator signs if needed."""
    if al.is_hermitian_pair(spec):
        return spec
    candidates = []
    if spec.tower.ext == "c":
        candidates.append(al.with_sigma(spec, {"i": -spec.sigma.gen_signs[spec.tower.generators.index("i")]}))
    if spec.tower.ext == "h":
        candidates.append(al.with_sigma(spec, {"i": -1, "j": -1}))
    for cand in candidates:
        if al.is_hermitian_pair(cand):
            return cand
    raise NotHermitianPair(f"no *-involution companion found for {spec}")


# ----------------------------------------------------------------------
# membership


def group_residuals(gid: GroupId, m: AlgebraElement) -> dict[str, float]:
    spec = gid.spec
    fam = gid.family
    res: dict[str, float] = {}
    sig = al.apply_sigma

    def form_res(gram):
        return (al.mul(al.mul(sig(m), gram), m) - gram).norm()

    if fam in (Family.SP2, Family.KSP2, Family.KSP2C):
        res["symplectic"] = form_res(omega_gram(spec, m.shape[0] // 2))
    if fam in (Family.O11, Family.KO11):
        res["indefinite"] = form_res(hform_gram(spec, m.shape[0] // 2))
    if fam in (Family.KSP2, Family.KO11):
        res["orthogonal"] = (al.mul(sig(m), m) - al.eye(spec, m.shape[0])).norm()
    if fam is Family.O2:
        res["orthogonal"] = (al.mul(sig(m), m) - al.eye(spec, m.shape[0])).norm()
    if fam is Family.KSP2C:
        res["unitary"] = (al.mul(_sigma_bar(m), m) - al.eye(spec, m.shape[0])).norm()
    if fam is Family.O_ALG:
        res["orthogonal"] = (al.mul(sig(m), m) - al.eye(spec, m.shape[0])).norm()
    if fam is Family.AX_HAT:
        a, b, c, d = blocks(m)
        res["offdiag"] = np.hypot(b.norm(), c.norm())
        res["inverse_pair"] = (al.mul(sig(a), d) - al.eye(spec, a.shape[0])).norm()
    if fam is Family.OC_HAT:
        a, b, c, d = blocks(m)
        res["real_structure"] = np.hypot((a - d).norm(), (b + c).norm())
        # a, b live over the base spec; merge them as a + b*i
        spec_c = al.extend(spec, "c")
        g = al.lift(a, spec_c) + al.unit_mul(al.lift(b, spec_c), "i")
        res["orthogonal"] = (al.mul(al.apply_sigma(g), g) - al.eye(spec_c, a.shape[0])).norm()
    if not res:
        raise Unsupported(f"membership undefined for {fam}")
    return res


def group_contains(gid: GroupId, m: AlgebraElement, tol: float = al.DEFAULT_TOL) -> bool:
    scale = max(1.0, m.norm() ** 2)
    return all(v <= tol * scale for v in group_residuals(gid, m).values())


def lie_residuals(gid: GroupId, xi: AlgebraElement) -> dict[str, float]:
    spec = gid.spec
    fam = gid.family
    sig = al.apply_sigma
    res: dict[str, float] = {}
    n2 = xi.shape[0]

    def form_res(gram):
        return (al.mul(sig(xi), gram) + al.mul(gram, xi)).norm()

    if fam in (Family.SP2, Family.KSP2, Family.KSP2C):
        res["symplectic"] = form_res(omega_gram(spec, n2 // 2))
    if fam in (Family.O11, Family.KO11):
        res["indefinite"] = form_res(hform_gram(spec, n2 // 2))
    if fam in (Family.KSP2, Family.KO11):
        res["antisym"] = (sig(xi) + xi).norm()
    if fam is Family.KSP2C:
        res["antiherm"] = (_sigma_bar(xi) + xi).norm()
    if fam is Family.O_ALG:
        res["antisym"] = (sig(xi) + xi).norm()
    if not res:
        raise Unsupported(f"Lie membership undefined for {fam}")
    return res


def lie_contains(gid: GroupId, xi: AlgebraElement, tol: float = al.DEFAULT_TOL) -> bool:
    scale = max(1.0, xi.norm())
    return all(v <= tol * scale for v in lie_residuals(gid, xi).values())


# ----------------------------------------------------------------------
# Cartan projection


def cartan_project(gid: GroupId, xi: AlgebraElement) -> tuple[AlgebraElement, AlgebraElement]:
    """Split xi into compact + symmetric parts for the pair fixed by the
    relevant maximal compact subgroup.

    Families SP2 and O11 use the spec involution; family KSP2C marks the
    complex-linear symplectic algebra split against its unitary compact.
    """
    if gid.family in (Family.SP2, Family.O11):
        tau = al.apply_sigma(xi)
    elif gid.family is Family.KSP2C:
        tau = _sigma_bar(xi)
    else:
        raise Unsupported(f"Cartan projection undefined for {gid.family}")
    k = (xi + (-1.0) * tau) * 0.5
    m = (xi + tau) * 0.5
    return k, m


# ----------------------------------------------------------------------
# distinguished conjugators


def conjugator(kind: str, spec: AlgebraSpec) -> AlgebraElement:
    """Fixed basis changes between compact pictures.

    "T": (1/sqrt2) [[1, i], [i, 1]]   (over the central extension)
    "R": (1/sqrt2) [[1, 1], [-1, 1]]
    "Q": (1/sqrt2) [[1, j], [j, 1]]   (over the quaternionic extension)
    "S": (1/sqrt2) [[1, 0], [0, i]]   (over the central extension)
    """
    s = 1.0 / np.sqrt(2.0)
    n = spec.n
    if kind == "R":
        e, z = al.eye(spec, n), al.zeros(spec, n)
        return assemble(spec, e, e, -e, e) * s
    if kind == "T":
        spec_c = al.extend(spec, "c") if spec.tower.ext == "none" else spec
        e = al.eye(spec_c, n)
        iu = al.scalar_unit(spec_c, "i", n)
        return assemble(spec_c, e, iu, iu, e) * s
    if kind == "Q":
        spec_h = al.extend(spec, "h") if spec.tower.ext == "none" else spec
        e = al.eye(spec_h, n)
        ju = al.scalar_unit(spec_h, "j", n)
        return assemble(spec_h, e, ju, ju, e) * s
    if kind == "S":
        spec_c = al.extend(spec, "c") if spec.tower.ext == "none" else spec
        e = al.eye(spec_c, n)
        z = al.zeros(spec_c, n)
        iu = al.scalar_unit(spec_c, "i", n)
        return assemble(spec_c, e, z, z, iu) * s
    raise Unsupported(f"unknown conjugator {kind!r}")


# ----------------------------------------------------------------------
# transporter and exponential


def transporter(gid: GroupId, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Upper triangular group element moving the half-space base point to
    the point with decomposition parts (x, y); y must be positive for the
    family's *-involution.
    """
    spec = gid.spec
    herm = hermitian_partner(spec)
    y_h = AlgebraElement(herm, y.coeffs)
    s_h = al.sqrt_positive(y_h)
    s = AlgebraElement(spec, s_h.coeffs)
    sig_s_inv = al.inv(al.apply_sigma(s))
    g = assemble(spec, s, al.mul(x, sig_s_inv), al.zeros(spec, x.shape[0]), sig_s_inv)
    return g


def exp_lie(xi: AlgebraElement) -> AlgebraElement:
    """Exponential through the left regular representation (square block
    matrices over the tower)."""
    op = al._left_operator(xi)
    e = scipy.linalg.expm(op)
    rhs = al._colstack(al.eye(xi.spec, xi.shape[0]))
    return al._colunstack(xi.spec, e @ rhs, xi.shape[0])


# ----------------------------------------------------------------------
# sampling


def sample_compact_lie(gid: GroupId, rng: np.random.Generator, scale: float = 0.6) -> AlgebraElement:
    """Random element of the maximal compact subalgebra pattern."""
    spec = gid.spec
    fam = gid.family
    if fam in (Family.KSP2, Family.SP2):
        a = al.sample(spec, "antisym", rng, scale=scale)
        b = al.sample(spec, "sym", rng, scale=scale)
        return assemble(spec, a, b, -b, a)
    if fam in (Family.KO11, Family.O11):
        a = al.sample(spec, "antisym", rng, scale=scale)
        b = al.sample(spec, "antisym", rng, scale=scale)
        return assemble(spec, a, b, b, a)
    if fam is Family.KSP2C:
        herm = hermitian_partner(spec)
        a = AlgebraElement(spec, al.sample(herm, "antisym", rng, scale=scale).coeffs)
        b = al.sample(spec, "sym", rng, scale=scale)
        return assemble(spec, a, b, -_bar(b), _bar(a))
    if fam in (Family.AX_HAT, Family.OC_HAT):
        x = al.sample(spec, "antisym", rng, scale=scale)
        z = al.zeros(spec)
        return assemble(spec, x, z, z, x)
    if fam is Family.O_ALG:
        return al.sample(spec, "antisym", rng, scale=scale)
    raise Unsupported(f"no compact pattern for {fam}")


def sample_lie(gid: GroupId, rng: np.random.Generator | int | None = None, scale: float = 0.6) -> AlgebraElement:
    """Random element of the sp2 / o11 pattern [[x, z], [y, -sigma(x)]]."""
    rng = np.random.default_rng(rng)
    spec = gid.spec
    if gid.family not in (Family.SP2, Family.O11):
        raise Unsupported(f"no Lie pattern sampler for {gid.family}")
    sign = 1 if gid.family is Family.SP2 else -1
    x = al.sample(spec, "free", rng, scale=scale)
    y = al.symmetry_part(al.sample(spec, "free", rng, scale=scale), sign)
    z = al.symmetry_part(al.sample(spec, "free", rng, scale=scale), sign)
    return assemble(spec, x, z, y, -al.apply_sigma(x))


def sample_group(gid: GroupId, rng: np.random.Generator | int | None = None, scale: float = 0.7) -> AlgebraElement:
    """Random group element: transporter of a random half-space point
    composed with the exponential of a random compact element.

    For pairs without a *-involution companion (no half-space picture)
    the sample is a product of exponentials of Lie-pattern elements.
    """
    rng = np.random.default_rng(rng)
    spec = gid.spec
    fam = gid.family
    if fam in (Family.SP2, Family.O11):
        sign = 1 if fam is Family.SP2 else -1
        x = al.symmetry_part(al.sample(spec, "free", rng, scale=scale), sign)
        try:
            herm = hermitian_partner(spec)
        except NotHermitianPair:
            g1 = exp_lie(sample_lie(gid, rng, scale=scale))
            g2 = exp_lie(sample_lie(gid, rng, scale=scale))
            return al.mul(g1, g2)
        y = AlgebraElement(spec, al.sample(herm, "positive", rng, scale=scale).coeffs)
        g = transporter(gid, x, y)
        compact_fam = Family.KSP2 if fam is Family.SP2 else Family.KO11
        if fam is Family.SP2 and not al.is_hermitian_pair(spec):
            compact_fam = Family.KSP2C
        k = exp_lie(sample_compact_lie(GroupId(compact_fam, spec), rng))
        return al.mul(g, k)
    if fam in (Family.KSP2, Family.KO11, Family.KSP2C):
        return exp_lie(sample_compact_lie(gid, rng))
    if fam is Family.O_ALG:
        return exp_lie(al.sample(spec, "antisym", rng, scale=scale))
    if fam is Family.AX_HAT:
        g = exp_lie(al.sample(spec, "free", rng, scale=scale))
        z = al.zeros(spec)
        return assemble(spec, g, z, z, al.inv(al.apply_sigma(g)))
    if fam is Family.OC_HAT:
        spec_c = al.extend(spec, "c")
        u = exp_lie(al.sample(spec_c, "antisym", rng, scale=scale))
        u0, u1 = al.split(u, "i")
        u0 = AlgebraElement(spec, u0.coeffs)
        u1 = AlgebraElement(spec, u1.coeffs)
        return assemble(spec, u0, u1, -u1, u0)
    raise Unsupported(f"sampling undefined for {fam}")
