"""Models of the symmetric spaces attached to an involutive algebra.

Every family comes with up to four models:

* ``C``: a space of structure operators on the pair module (involutive,
  complex or quaternionic, with a positivity constraint on the induced
  sesquilinear form), acted on by conjugation;
* ``P``: a space of lines in the pair module (an open piece of the
  projective space, possibly cut out by isotropy conditions), acted on
  linearly;
* ``U``: an unbounded half-space chart inside the algebra, acted on by
  Moebius transformations;
* ``B``: a bounded chart inside the algebra, acted on by Moebius
  transformations through a conjugated copy of the group.

Families: the indefinite orthogonal family ``O11``, its congruence
subfamily ``AX`` and complex-orthogonal subfamily ``OC``, the real
symplectic family ``SP2`` and the complex symplectic family ``SP2C``;
plus the line models of the three maximal compact groups.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import algebra as al
from . import groups as gr
from .algebra import AlgebraElement, AlgebraSpec, Sign
from .errors import (
    NotInModel,
    NotRegular,
    SingularDenominator,
    Unsupported,
)
from .groups import Family as GF
from .groups import GroupId


class ModelFamily(enum.Enum):
    O11 = "o11"
    AX = "ax"
    OC = "oc"
    SP2 = "sp2"
    SP2C = "sp2c"
    CPT_KO11 = "cpt_ko11"
    CPT_KSP2 = "cpt_ksp2"
    CPT_KSP2C = "cpt_ksp2c"


class Kind(enum.Enum):
    C = "C"
    P = "P"
    U = "U"
    B = "B"


_SIGNED_KINDS = {Kind.P, Kind.U}
_CPT = {ModelFamily.CPT_KO11, ModelFamily.CPT_KSP2, ModelFamily.CPT_KSP2C}


@dataclass(frozen=True)
class ModelId:
    family: ModelFamily
    kind: Kind
    spec: AlgebraSpec  # base algebra (no extension)
    sign: int = 1

    def __post_init__(self):
        if self.spec.tower.ext != "none":
            raise Unsupported("model base spec must be unextended")
        if self.family in _CPT and self.kind is not Kind.P:
            raise Unsupported("compact families only have a line model")


@dataclass
class ModelPoint:
    mid: ModelId
    value: AlgebraElement


@dataclass
class TangentVector:
    mid: ModelId
    point: ModelPoint
    value: AlgebraElement


# ----------------------------------------------------------------------
# derived specs


@lru_cache(maxsize=None)
def spec_c(spec: AlgebraSpec) -> AlgebraSpec:
    """Central extension with the linear involution."""
    return al.extend(spec, "c")


@lru_cache(maxsize=None)
def spec_c_bar(spec: AlgebraSpec) -> AlgebraSpec:
    """Central extension with the conjugate-linear involution (Hermitian)."""
    return al.extend(spec, "c", ext_signs=(-1,))


@lru_cache(maxsize=None)
def spec_h(spec: AlgebraSpec) -> AlgebraSpec:
    """Quaternionic extension with the linear involution on x + y j."""
    return al.extend(spec, "h")


@lru_cache(maxsize=None)
def spec_h1(spec: AlgebraSpec) -> AlgebraSpec:
    """Quaternionic extension with the *-involution (Hermitian)."""
    return al.extend(spec, "h", ext_signs=(-1, -1))


def payload_spec(mid: ModelId) -> AlgebraSpec:
    """Spec over which the point's coefficients live."""
    fam, kind = mid.family, mid.kind
    if fam in (ModelFamily.O11, ModelFamily.AX, ModelFamily.OC, ModelFamily.CPT_KO11, ModelFamily.CPT_KSP2):
        return mid.spec
    if fam is ModelFamily.SP2:
        return mid.spec if kind is Kind.C else spec_c(mid.spec)
    if fam is ModelFamily.SP2C:
        return spec_c(mid.spec) if kind is Kind.C else spec_h(mid.spec)
    if fam is ModelFamily.CPT_KSP2C:
        return spec_c(mid.spec)
    raise Unsupported(str(fam))


def herm_spec(mid: ModelId) -> AlgebraSpec:
    """Hermitian companion of the payload spec, used for positivity."""
    ps = payload_spec(mid)
    if al.is_hermitian_pair(ps):
        return ps
    return gr.hermitian_partner(ps)


def group_for(mid: ModelId) -> GroupId:
    fam = mid.family
    if fam is ModelFamily.O11:
        return GroupId(GF.O11, mid.spec)
    if fam is ModelFamily.AX:
        return GroupId(GF.AX_HAT, mid.spec)
    if fam is ModelFamily.OC:
        return GroupId(GF.OC_HAT, mid.spec)
    if fam is ModelFamily.SP2:
        return GroupId(GF.SP2, mid.spec)
    if fam is ModelFamily.SP2C:
        return GroupId(GF.SP2, spec_c(mid.spec))
    if fam is ModelFamily.CPT_KO11:
        return GroupId(GF.KO11, mid.spec)
    if fam is ModelFamily.CPT_KSP2:
        return GroupId(GF.KSP2, mid.spec)
    if fam is ModelFamily.CPT_KSP2C:
        return GroupId(GF.KSP2C, spec_c(mid.spec))
    raise Unsupported(str(fam))


# ----------------------------------------------------------------------
# sesquilinear forms


class Form(enum.Enum):
    OMEGA = "omega"          # sigma-sesquilinear, Gram [[0, 1], [-1, 0]]
    HFORM = "hform"          # sigma-sesquilinear, Gram [[0, 1], [1, 0]]
    BDIAG = "bdiag"          # sigma-sesquilinear, Gram diag(-1, 1)
    H_SP2 = "h_sp2"          # conjugate-sesquilinear, Gram [[0, i], [-i, 0]]
    H_SP2C = "h_sp2c"        # sigma1-sesquilinear,  Gram [[0, j], [-j, 0]]


def _gram(form: Form, spec: AlgebraSpec, n: int) -> AlgebraElement:
    if form is Form.OMEGA:
        return gr.omega_gram(spec, n)
    if form is Form.HFORM:
        return gr.hform_gram(spec, n)
    if form is Form.BDIAG:
        return gr.bdiag_gram(spec, n)
    if form is Form.H_SP2:
        z = al.zeros(spec, n)
        iu = al.scalar_unit(spec, "i", n)
        return gr.assemble(spec, z, iu, -iu, z)
    if form is Form.H_SP2C:
        z = al.zeros(spec, n)
        ju = al.scalar_unit(spec, "j", n)
        return gr.assemble(spec, z, ju, -ju, z)
    raise Unsupported(str(form))


def _tau(form: Form, x: AlgebraElement) -> AlgebraElement:
    """Sesquilinear transpose of the first argument."""
    if form is Form.H_SP2:
        return al.apply_theta(al.apply_sigma(x), "i")
    if form is Form.H_SP2C:
        # sigma1 = sigma0 with both extension units conjugated
        return al.apply_theta(al.apply_theta(al.apply_sigma(x), "i"), "j")
    return al.apply_sigma(x)


def eval_form(form: Form, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Value of the form on stacked pair columns ((2n, k) elements)."""
    n = x.shape[0] // 2
    g = _gram(form, x.spec, n)
    return al.mul(al.mul(_tau(form, x), g), y)


def _family_forms(fam: ModelFamily) -> tuple[Form | None, Form | None]:
    """(positivity form h, isotropy form) for the line model."""
    return {
        ModelFamily.O11: (Form.HFORM, None),
        ModelFamily.AX: (Form.HFORM, Form.OMEGA),
        ModelFamily.OC: (Form.HFORM, Form.BDIAG),
        ModelFamily.SP2: (Form.H_SP2, Form.OMEGA),
        ModelFamily.SP2C: (Form.H_SP2C, Form.OMEGA),
        ModelFamily.CPT_KO11: (None, Form.HFORM),
        ModelFamily.CPT_KSP2: (None, Form.OMEGA),
        ModelFamily.CPT_KSP2C: (None, Form.OMEGA),
    }[fam]


def _as_herm(mid: ModelId, value: AlgebraElement) -> AlgebraElement:
    """Reinterpret a form value over the Hermitian companion spec."""
    return AlgebraElement(herm_spec(mid), value.coeffs)


def is_regular(x: AlgebraElement, tol: float = 1e-9) -> bool:
    """Does the stacked pair span a line (left-invertible embedding)?"""
    e = al.embed_complex(x)
    sv = np.linalg.svd(e, compute_uv=False)
    return bool(sv[-1] > max(tol, 1e-12) * max(1.0, sv[0]))


# ----------------------------------------------------------------------
# base points


def basepoint(mid: ModelId) -> ModelPoint:
    fam, kind, s = mid.family, mid.kind, mid.sign
    ps = payload_spec(mid)
    n = mid.spec.n
    if kind is Kind.C:
        z, e = al.zeros(ps, n), al.eye(ps, n)
        if fam is ModelFamily.SP2 or fam is ModelFamily.SP2C:
            val = gr.assemble(ps, z, e, -e, z)
        else:
            val = gr.assemble(ps, z, e, e, z)
        return ModelPoint(mid, val)
    if kind is Kind.P:
        e = al.eye(ps, n)
        if fam in (ModelFamily.CPT_KO11, ModelFamily.CPT_KSP2, ModelFamily.CPT_KSP2C):
            return ModelPoint(mid, gr.stack_pair(e, al.zeros(ps, n)))
        if fam is ModelFamily.SP2:
            top = al.scalar_unit(ps, "i", n) * float(s)
        elif fam is ModelFamily.SP2C:
            top = al.scalar_unit(ps, "j", n) * float(s)
        else:
            top = e * float(s)
            return ModelPoint(mid, gr.stack_pair(e, top))
        return ModelPoint(mid, gr.stack_pair(top, e))
    if kind is Kind.U:
        if fam is ModelFamily.SP2:
            return ModelPoint(mid, al.scalar_unit(ps, "i", n) * float(s))
        if fam is ModelFamily.SP2C:
            return ModelPoint(mid, al.scalar_unit(ps, "j", n) * float(s))
        return ModelPoint(mid, al.eye(ps, n) * float(s))
    if kind is Kind.B:
        return ModelPoint(mid, al.zeros(ps, n))
    raise Unsupported(str(kind))


# ----------------------------------------------------------------------
# membership


def _anti_J(m: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
    """Apply the anti-linear operator with matrix m: x -> m theta_i(x)."""
    return al.mul(m, al.apply_theta(x, "i"))


def point_residuals(p: ModelPoint, tol: float = al.DEFAULT_TOL) -> dict[str, float]:
    mid = p.mid
    fam, kind, s = mid.family, mid.kind, mid.sign
    ps = payload_spec(mid)
    n = mid.spec.n
    v = p.value
    res: dict[str, float] = {}
    sig = al.apply_sigma

    def posdef(name, elem, want=Sign.POSITIVE):
        cls = al.is_positive(_as_herm(mid, elem), tol=tol)
        res[name] = 0.0 if cls is want else 1.0

    if kind is Kind.C:
        if fam is ModelFamily.SP2C:
            res["square"] = (al.mul(v, al.apply_theta(v, "i")) + al.eye(ps, 2 * n)).norm()
            gram = al.mul(sig(v), gr.omega_gram(ps, n))
            posdef("inner", gram)
        else:
            target = al.eye(ps, 2 * n) * (-1.0 if fam is ModelFamily.SP2 else 1.0)
            res["square"] = (al.mul(v, v) - target).norm()
            hg = gr.omega_gram(ps, n) if fam is ModelFamily.SP2 else gr.hform_gram(ps, n)
            posdef("inner", al.mul(sig(v), hg))
            if fam is ModelFamily.AX:
                om = gr.omega_gram(ps, n)
                res["antisymplectic"] = (al.mul(al.mul(sig(v), om), v) + om).norm()
            if fam is ModelFamily.OC:
                bg = gr.bdiag_gram(ps, n)
                res["antiisometric"] = (al.mul(al.mul(sig(v), bg), v) + bg).norm()
        return res

    if kind is Kind.P:
        res["regular"] = 0.0 if is_regular(v) else 1.0
        hf, iso = _family_forms(fam)
        if iso is not None:
            res["isotropic"] = eval_form(iso, v, v).norm()
        if hf is not None:
            want = Sign.POSITIVE if s > 0 else Sign.NEGATIVE
            posdef("definite", eval_form(hf, v, v), want)
        elif fam is ModelFamily.CPT_KO11:
            res["isotropic_h"] = eval_form(Form.HFORM, v, v).norm()
        return res

    if kind is Kind.U:
        if fam is ModelFamily.O11:
            posdef("positive", al.symmetry_part(v) * float(s))
        elif fam is ModelFamily.AX:
            res["symmetric"] = (v - sig(v)).norm()
            posdef("positive", v * float(s))
        elif fam is ModelFamily.OC:
            res["orthogonal"] = (al.mul(sig(v), v) - al.eye(ps, n)).norm()
            posdef("positive", al.symmetry_part(v) * float(s))
        elif fam is ModelFamily.SP2:
            res["symmetric"] = (v - sig(v)).norm()
            _, y = al.split(v, "i")
            posdef("positive", al.lift(y, ps) * float(s))
        elif fam is ModelFamily.SP2C:
            res["symmetric"] = (v - sig(v)).norm()
            _, y = al.split(v, "j")
            posdef("positive", al.lift(y, ps) * float(s))
        else:
            raise Unsupported(f"{fam} has no half-space model")
        return res

    if kind is Kind.B:
        e = al.eye(ps, n)
        if fam is ModelFamily.O11:
            posdef("ball", e - al.mul(sig(v), v))
        elif fam is ModelFamily.AX:
            res["symmetric"] = (v - sig(v)).norm()
            posdef("ball", e - al.mul(v, v))
        elif fam is ModelFamily.OC:
            res["antisymmetric"] = (v + sig(v)).norm()
            posdef("ball", e + al.mul(v, v))
        elif fam is ModelFamily.SP2:
            res["symmetric"] = (v - sig(v)).norm()
            posdef("ball", e - al.mul(al.apply_theta(v, "i"), v))
        elif fam is ModelFamily.SP2C:
            res["symmetric"] = (v - sig(v)).norm()
            s1v = al.apply_theta(al.apply_theta(sig(v), "i"), "j")
            posdef("ball", e - al.mul(s1v, v))
        else:
            raise Unsupported(f"{fam} has no bounded model")
        return res

    raise Unsupported(str(kind))


def contains(p: ModelPoint, tol: float = al.DEFAULT_TOL) -> bool:
    scale = max(1.0, p.value.norm() ** 2)
    return all(r <= tol * scale for r in point_residuals(p, tol=tol).values())


# ----------------------------------------------------------------------
# tangency


def tangent_residual_fns(p: ModelPoint):
    """List of (name, fn) residual maps that vanish exactly on tangents."""
    mid = p.mid
    fam, kind = mid.family, mid.kind
    ps = payload_spec(mid)
    n = mid.spec.n
    sig = al.apply_sigma
    fns = []

    if kind is Kind.C:
        J = p.value
        if fam is ModelFamily.SP2C:
            fns.append(("anticommute", lambda L: al.mul(L, al.apply_theta(J, "i"))
                        + al.mul(J, al.apply_theta(L, "i"))))
            om = gr.omega_gram(ps, n)

            def herm(L, om=om):
                g = al.mul(sig(L), om)
                gb = al.apply_theta(g, "i")
                return sig(gb) - g

            fns.append(("symmetric_form", herm))
        else:
            fns.append(("anticommute", lambda L: al.mul(L, J) + al.mul(J, L)))
            if fam is ModelFamily.AX:
                om = gr.omega_gram(ps, n)
                fns.append(("form", lambda L: al.mul(sig(L), om) + al.mul(om, L)))
            if fam is ModelFamily.OC:
                bg = gr.bdiag_gram(ps, n)
                fns.append(("form", lambda L: al.mul(sig(L), bg) + al.mul(bg, L)))
            if fam is ModelFamily.SP2:
                om = gr.omega_gram(ps, n)
                fns.append(("symmetric_form", lambda L: sig(al.mul(sig(L), om)) - al.mul(sig(L), om)))
        return fns

    if kind is Kind.P:
        x = p.value
        _, iso = _family_forms(fam)
        if fam is ModelFamily.AX:
            fns.append(("pairing", lambda w: (lambda f: f - sig(f))(eval_form(Form.OMEGA, w, x))))
        elif fam is ModelFamily.OC:
            fns.append(("pairing", lambda w: (lambda f: f + sig(f))(eval_form(Form.BDIAG, w, x))))
        elif fam is ModelFamily.SP2:
            fns.append(("pairing", lambda w: (lambda f: f - sig(f))(eval_form(Form.OMEGA, w, x))))
        elif fam is ModelFamily.SP2C:
            fns.append(("pairing", lambda w: (lambda f: f - sig(f))(eval_form(Form.OMEGA, w, x))))
        # O11 and the compact families: unconstrained homs
        return fns

    if kind is Kind.U:
        if fam is ModelFamily.AX:
            fns.append(("symmetric", lambda v: v - sig(v)))
        elif fam is ModelFamily.OC:
            zinv = sig(p.value)  # z in O(A, sigma) so z^{-1} = sigma(z)
            fns.append(("antisym_frame", lambda v: (lambda u: u + sig(u))(al.mul(zinv, v))))
        elif fam in (ModelFamily.SP2, ModelFamily.SP2C):
            fns.append(("symmetric", lambda v: v - sig(v)))
        return fns

    if kind is Kind.B:
        if fam is ModelFamily.AX:
            fns.append(("symmetric", lambda v: v - sig(v)))
        elif fam is ModelFamily.OC:
            fns.append(("antisymmetric", lambda v: v + sig(v)))
        elif fam in (ModelFamily.SP2, ModelFamily.SP2C):
            fns.append(("symmetric", lambda v: v - sig(v)))
        return fns

    raise Unsupported(str(kind))


def tangent_residuals(t: TangentVector) -> dict[str, float]:
    return {name: fn(t.value).norm() for name, fn in tangent_residual_fns(t.point)}


def tangent_contains(t: TangentVector, tol: float = al.DEFAULT_TOL) -> bool:
    scale = max(1.0, t.value.norm()) * max(1.0, t.point.value.norm())
    return all(r <= tol * scale for r in tangent_residuals(t).values())


# ----------------------------------------------------------------------
# group action


def _conjugator_kind(fam: ModelFamily) -> str:
    return {
        ModelFamily.O11: "R",
        ModelFamily.AX: "R",
        ModelFamily.OC: "R",
        ModelFamily.SP2: "T",
        ModelFamily.SP2C: "Q",
    }[fam]


def _lift_group(mid: ModelId, g: AlgebraElement) -> AlgebraElement:
    ps = payload_spec(mid)
    if g.spec.tower == ps.tower:
        return AlgebraElement(ps, g.coeffs)
    return al.lift(g, ps)


def _moebius(g: AlgebraElement, z: AlgebraElement) -> AlgebraElement:
    a, b, c, d = gr.blocks(g)
    den = al.mul(c, z) + d
    if not al.is_invertible(den, tol=1e-10):
        raise SingularDenominator("Moebius denominator is singular")
    return al.mul(al.mul(a, z) + b, al.inv(den))


def _moebius_tangent(g: AlgebraElement, z: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    a, b, c, d = gr.blocks(g)
    den_inv = al.inv(al.mul(c, z) + d)
    num = al.mul(al.mul(a, z) + b, den_inv)
    return al.mul(al.mul(a, v), den_inv) - al.mul(num, al.mul(al.mul(c, v), den_inv))


def _b_model_group(mid: ModelId, g: AlgebraElement) -> AlgebraElement:
    """Conjugate the group element into the frame of the bounded chart."""
    kind = _conjugator_kind(mid.family)
    ps = payload_spec(mid)
    cj = gr.conjugator(kind, mid.spec)
    cj = AlgebraElement(ps, al.lift(cj, ps).coeffs) if cj.spec.tower != ps.tower else AlgebraElement(ps, cj.coeffs)
    gl = _lift_group(mid, g)
    return al.mul(al.mul(al.inv(cj), gl), cj)


def act(g: AlgebraElement, p: ModelPoint) -> ModelPoint:
    mid = p.mid
    kind = mid.kind
    if kind is Kind.C:
        gl = _lift_group(mid, g)
        if mid.family is ModelFamily.SP2C:
            new = al.mul(al.mul(gl, p.value), al.apply_theta(al.inv(gl), "i"))
        else:
            new = al.mul(al.mul(gl, p.value), al.inv(gl))
        return ModelPoint(mid, new)
    if kind is Kind.P:
        return ModelPoint(mid, al.mul(_lift_group(mid, g), p.value))
    if kind is Kind.U:
        return ModelPoint(mid, _moebius(_lift_group(mid, g), p.value))
    if kind is Kind.B:
        return ModelPoint(mid, _moebius(_b_model_group(mid, g), p.value))
    raise Unsupported(str(kind))


def act_tangent(g: AlgebraElement, t: TangentVector) -> TangentVector:
    mid = t.mid
    kind = mid.kind
    p_new = act(g, t.point)
    if kind is Kind.C:
        gl = _lift_group(mid, g)
        if mid.family is ModelFamily.SP2C:
            new = al.mul(al.mul(gl, t.value), al.apply_theta(al.inv(gl), "i"))
        else:
            new = al.mul(al.mul(gl, t.value), al.inv(gl))
        return TangentVector(mid, p_new, new)
    if kind is Kind.P:
        return TangentVector(mid, p_new, al.mul(_lift_group(mid, g), t.value))
    if kind is Kind.U:
        gl = _lift_group(mid, g)
        return TangentVector(mid, p_new, _moebius_tangent(gl, t.point.value, t.value))
    if kind is Kind.B:
        gl = _b_model_group(mid, g)
        return TangentVector(mid, p_new, _moebius_tangent(gl, t.point.value, t.value))
    raise Unsupported(str(kind))


# ----------------------------------------------------------------------
# metric (half-space models)


def _herm_adjoint(mid: ModelId, v: AlgebraElement) -> AlgebraElement:
    """The *-involution of the family's Hermitian pair applied to v."""
    fam = mid.family
    out = al.apply_sigma(v)
    if fam is ModelFamily.SP2:
        out = al.apply_theta(out, "i")
    elif fam is ModelFamily.SP2C:
        out = al.apply_theta(al.apply_theta(out, "i"), "j")
    return out


def _metric_y(p: ModelPoint) -> AlgebraElement:
    fam, s = p.mid.family, p.mid.sign
    ps = payload_spec(p.mid)
    if fam in (ModelFamily.O11, ModelFamily.OC):
        y = al.symmetry_part(p.value)
    elif fam is ModelFamily.AX:
        y = p.value
    elif fam is ModelFamily.SP2:
        y = al.lift(al.split(p.value, "i")[1], ps)
    elif fam is ModelFamily.SP2C:
        y = al.lift(al.split(p.value, "j")[1], ps)
    else:
        raise Unsupported(f"{fam} has no half-space metric")
    return y * float(s)


def metric(p: ModelPoint, v: AlgebraElement, w: AlgebraElement) -> float:
    """Invariant Riemannian metric in the half-space model.

    g_z(v, w) with g_z(v, v) = tr(y^{-1/2} v* y^{-1} v y^{-1/2}), where y
    is the positive part of z and * the Hermitian involution of the
    family; polarized for two arguments.
    """
    mid = p.mid
    if mid.kind is not Kind.U:
        raise Unsupported("metric is evaluated in the half-space model")
    y = _metric_y(p)
    ps = payload_spec(mid)
    hs = herm_spec(mid)
    s_h = al.sqrt_positive(AlgebraElement(hs, y.coeffs))
    linv = al.inv(AlgebraElement(ps, s_h.coeffs))
    if mid.family is ModelFamily.SP2C:
        # the right-hand factor carries the conjugate square root, so that
        # the quadratic form stays invariant under the full Moebius action
        rinv = al.apply_theta(linv, "i")
    else:
        rinv = linv

    def q(u):
        s = al.mul(al.mul(linv, u), rinv)
        return al.reduced_trace(al.mul(_herm_adjoint(mid, s), s))

    return 0.25 * (q(v + w) - q(v - w))


def metric_base(p: ModelPoint, v: AlgebraElement, w: AlgebraElement) -> float:
    """Simplified pairing at the base point: tr(v* o w) by polarization."""
    mid = p.mid
    a = al.reduced_trace(al.mul(_herm_adjoint(mid, v), w))
    b = al.reduced_trace(al.mul(_herm_adjoint(mid, w), v))
    return 0.5 * (a + b)


def transporter_to(p: ModelPoint) -> gr.GroupElement:
    """Upper-triangular group element moving the half-space base point to
    p (realizing the transitive action constructively)."""
    mid = p.mid
    if mid.kind is not Kind.U:
        raise Unsupported("transporter is defined on half-space points")
    if not contains(p):
        raise NotInModel("transporter requires a half-space model point")
    fam, s = mid.family, float(mid.sign)
    if fam in (ModelFamily.O11, ModelFamily.OC):
        x = p.value - al.symmetry_part(p.value)
        y = al.symmetry_part(p.value) * s
        gid = GroupId(GF.O11, mid.spec)
    elif fam is ModelFamily.AX:
        x = al.zeros(mid.spec, mid.spec.n)
        y = p.value * s
        gid = GroupId(GF.AX_HAT, mid.spec)
    elif fam is ModelFamily.SP2:
        x, y = al.split(p.value, "i")
        y = y * s
        gid = GroupId(GF.SP2, mid.spec)
    elif fam is ModelFamily.SP2C:
        x, y = al.split(p.value, "j")
        y = y * s
        gid = GroupId(GF.SP2, spec_c(mid.spec))
    else:
        raise Unsupported(f"no transporter for {fam}")
    return gr.GroupElement(gid, gr.transporter(gid, x, y))


# ----------------------------------------------------------------------
# line comparison and sampling


def line_equal(x: AlgebraElement, y: AlgebraElement, tol: float = 1e-8) -> bool:
    """Do the stacked pairs generate the same line (y = x a, a invertible)?"""
    op = al._left_operator(x)
    rhs = al._colstack(y)
    sol, *_ = np.linalg.lstsq(op, rhs, rcond=None)
    a = al._colunstack(x.spec, sol, x.shape[1])
    if not al.is_invertible(a, tol=1e-10):
        return False
    return (al.mul(x, a) - y).norm() <= tol * max(1.0, y.norm())


def sample_point(mid: ModelId, rng: np.random.Generator | int | None = None) -> ModelPoint:
    """Random model point: a random group element applied to the base point."""
    rng = np.random.default_rng(rng)
    g = gr.sample_group(group_for(mid), rng)
    return act(g, basepoint(mid))


def _pattern_dim(p: ModelPoint) -> tuple[int, int, int]:
    kind = p.mid.kind
    n = p.mid.spec.n
    if kind is Kind.C:
        return (2 * n, 2 * n, payload_spec(p.mid).dim)
    if kind is Kind.P:
        return (2 * n, n, payload_spec(p.mid).dim)
    return (n, n, payload_spec(p.mid).dim)


def geometric_tangent_fns(p: ModelPoint):
    """Constraint maps cutting out the geometric tangent space at p.

    Same as ``tangent_residual_fns`` except for the indefinite C model,
    where the permissive anticommutation condition is sharpened by the
    symmetry of the induced form, so that curves stay inside the model.
    """
    fns = [fn for _, fn in tangent_residual_fns(p)]
    fam = p.mid.family
    if fam in (ModelFamily.O11, ModelFamily.AX, ModelFamily.OC) and p.mid.kind is Kind.C:
        ps = payload_spec(p.mid)
        J = p.value
        om = gr.hform_gram(ps, p.mid.spec.n)
        sig = al.apply_sigma
        if fam is ModelFamily.O11:
            fns = [lambda L: al.mul(L, J) + al.mul(J, L)]
        fns = fns + [lambda L: sig(al.mul(sig(L), om)) - al.mul(sig(L), om)]
    return fns


def sample_tangent(p: ModelPoint, rng: np.random.Generator | int | None = None, scale: float = 1.0) -> TangentVector:
    """Random tangent vector at p: a raw coefficient sample projected onto
    the kernel of the tangency constraints."""
    rng = np.random.default_rng(rng)
    shape = _pattern_dim(p)
    ps = payload_spec(p.mid)
    raw = AlgebraElement(ps, scale * rng.standard_normal(shape))
    fns = geometric_tangent_fns(p)
    if not fns:
        return TangentVector(p.mid, p, raw)
    return TangentVector(p.mid, p, _project_to_kernel(raw, fns))


def _project_to_kernel(raw: AlgebraElement, fns) -> AlgebraElement:
    """Orthogonal projection of the coefficient vector onto the common
    kernel of the linear residual maps."""
    spec = raw.spec
    shape = raw.coeffs.shape
    dim = int(np.prod(shape))
    cols = []
    basis = np.eye(dim)
    rows = []
    for fn in fns:
        out0 = fn(AlgebraElement(spec, np.zeros(shape)))
        for k in range(dim):
            e = AlgebraElement(spec, basis[k].reshape(shape))
            rows_k = (fn(e) - out0).coeffs.reshape(-1)
            cols.append(rows_k)
        rows.append(len(cols))
    a = np.stack(cols, axis=0)
    # stack per-map blocks into one constraint matrix of shape (m, dim)
    blocks = []
    start = 0
    for end in rows:
        blocks.append(a[start:end].T)
        start = end
    mat = np.concatenate(blocks, axis=0)
    u, s, vt = np.linalg.svd(mat)
    tol = max(mat.shape) * np.finfo(float).eps * (s[0] if s.size else 1.0)
    null = vt[np.sum(s > tol):]
    vec = raw.coeffs.reshape(-1)
    proj = null.T @ (null @ vec)
    return AlgebraElement(spec, proj.reshape(shape))
