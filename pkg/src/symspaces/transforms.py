"""Conversions between the models of a symmetric space.

The four models of each family are connected by explicit diffeomorphisms
along the primitive edges C<->P, P<->U, P<->B and U<->B; any other pair is
reached by composing primitives through the line model P.  This module
implements the point maps, their analytic differentials, the eigenline
extraction underlying C->P, canonical tangent coordinates for the
symplectic family, and a finite-difference oracle used to cross-check the
analytic differentials in tests.

Line-model values are representatives of right-module lines; maps into P
return a deterministic representative, and quantities attached to P are
compared modulo the vertical directions ``x * A``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as al
from . import groups as gr
from . import models as md
from .algebra import AlgebraElement, AlgebraSpec
from .errors import (
    KernelRankMismatch,
    NonTransverse,
    NotTangent,
    StepTooLarge,
    Unsupported,
)
from .models import Kind, ModelFamily, ModelId, ModelPoint, TangentVector

_PRIMITIVE = {
    (Kind.C, Kind.P), (Kind.P, Kind.C),
    (Kind.P, Kind.U), (Kind.U, Kind.P),
    (Kind.P, Kind.B), (Kind.B, Kind.P),
    (Kind.U, Kind.B), (Kind.B, Kind.U),
}


@dataclass(frozen=True)
class MapId:
    """A conversion between two models of the same family."""

    family: ModelFamily
    from_kind: Kind
    to_kind: Kind
    from_sign: int = 1
    to_sign: int = 1

    @property
    def is_primitive(self) -> bool:
        return (self.from_kind, self.to_kind) in _PRIMITIVE


def route(from_kind: Kind, to_kind: Kind) -> list[tuple[Kind, Kind]]:
    """Sequence of primitive edges realizing the conversion."""
    if from_kind is to_kind:
        return []
    if (from_kind, to_kind) in _PRIMITIVE:
        return [(from_kind, to_kind)]
    # all remaining pairs route through the line model
    return route(from_kind, Kind.P) + route(Kind.P, to_kind)


# ----------------------------------------------------------------------
# small helpers


def _hstack(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(a.spec, np.concatenate([a.coeffs, b.coeffs], axis=1))


def _first_block(m: AlgebraElement, n: int) -> AlgebraElement:
    return AlgebraElement(m.spec, m.coeffs[:, :n])


def _e_block(spec: AlgebraSpec, n: int, which: int) -> AlgebraElement:
    """Stacked (2n, n) element with the identity in block ``which``."""
    e, z = al.eye(spec, n), al.zeros(spec, n)
    return gr.stack_pair(e, z) if which == 0 else gr.stack_pair(z, e)


def _chart_conjugator(mid: ModelId) -> AlgebraElement:
    """The basis change between the half-space and bounded charts, lifted
    to the payload spec of the chart models."""
    kind = md._conjugator_kind(mid.family)
    ps = md.payload_spec(ModelId(mid.family, Kind.U, mid.spec, mid.sign))
    cj = gr.conjugator(kind, mid.spec)
    if cj.spec.tower != ps.tower:
        cj = al.lift(cj, ps)
    else:
        cj = AlgebraElement(ps, cj.coeffs)
    return cj


def _mid(p_or_mid, kind: Kind, sign: int) -> ModelId:
    base = p_or_mid if isinstance(p_or_mid, ModelId) else p_or_mid.mid
    if kind in md._SIGNED_KINDS:
        return ModelId(base.family, kind, base.spec, sign)
    return ModelId(base.family, kind, base.spec)


def _quat_apply(m: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
    """Apply the conjugate-linear operator with matrix m over the
    half-extension: x = u + v j maps to m theta_i(u) + m theta_i(v) j."""
    u, v = al.split(x, "j")
    mu = al.mul(m, al.apply_theta(u, "i"))
    mv = al.mul(m, al.apply_theta(v, "i"))
    return al.join(mu, mv, "j", x.spec)


def _null_basis(spec: AlgebraSpec, shape: tuple[int, int, int], fns) -> list[AlgebraElement]:
    """Orthonormal basis of the common kernel of real-linear maps."""
    dim = int(np.prod(shape))
    eye = np.eye(dim)
    blocks = []
    for fn in fns:
        out0 = fn(AlgebraElement(spec, np.zeros(shape))).coeffs.reshape(-1)
        cols = [
            (fn(AlgebraElement(spec, eye[k].reshape(shape))).coeffs.reshape(-1) - out0)
            for k in range(dim)
        ]
        blocks.append(np.stack(cols, axis=1))
    mat = np.concatenate(blocks, axis=0)
    u, s, vt = np.linalg.svd(mat)
    tol = max(mat.shape) * np.finfo(float).eps * (s[0] if s.size else 1.0)
    null = vt[int(np.sum(s > tol)):]
    return [AlgebraElement(spec, row.reshape(shape)) for row in null]


def _regular_combination(basis: list[AlgebraElement], tol: float = 1e-7) -> AlgebraElement:
    """Deterministic regular representative from a kernel basis."""
    for cand in basis:
        if md.is_regular(cand, tol=tol):
            return cand
    rng = np.random.default_rng(0)
    for _ in range(32):
        w = rng.standard_normal(len(basis))
        cand = AlgebraElement(basis[0].spec, sum(c * b.coeffs for c, b in zip(w, basis)))
        if md.is_regular(cand, tol=tol):
            return cand
    raise KernelRankMismatch("kernel contains no regular representative")


def vertical_projector(x: AlgebraElement) -> np.ndarray:
    """Orthogonal projector (on column-stacked coefficients) onto the
    vertical directions x * A at a line representative x."""
    op = al._left_operator(x)
    q, _ = np.linalg.qr(op)
    return q @ q.T


def class_project(x: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """Component of the tangent representative v transverse to the line
    class of x (the vertical directions x * A are removed)."""
    pv = vertical_projector(x)
    cs = al._colstack(v)
    return al._colunstack(v.spec, cs - pv @ cs, v.shape[0])


def tangent_mismatch(t1: TangentVector, t2: TangentVector) -> float:
    """Norm of the difference of two tangents at the same point, modulo
    the line-class ambiguity for P-kind tangents."""
    d = t1.value - t2.value
    if t1.mid.kind is Kind.P:
        return class_project(t1.point.value, d).norm()
    return d.norm()


# ----------------------------------------------------------------------
# eigenline extraction (C -> P)


def _eigen_residual_fn(p: ModelPoint, sign: int):
    """Real-linear map on P payload whose kernel is the requested
    eigenline of the structure operator."""
    fam = p.mid.family
    pmid = _mid(p, Kind.P, sign)
    ps = md.payload_spec(pmid)
    s = float(sign)
    if fam in (ModelFamily.O11, ModelFamily.AX, ModelFamily.OC):
        J = p.value
        return lambda v: al.mul(J, v) - v * s
    if fam is ModelFamily.SP2:
        Jc = al.lift(p.value, ps)
        return lambda v: al.mul(Jc, v) + al.unit_mul(v, "i") * s
    if fam is ModelFamily.SP2C:
        M = p.value  # over the central extension

        def res(v, M=M):
            u, w = al.split(v, "j")
            jv = al.join(al.mul(M, al.apply_theta(u, "i")),
                         al.mul(M, al.apply_theta(w, "i")), "j", v.spec)
            return jv + al.unit_mul(v, "j") * s

        return res
    raise Unsupported(f"no eigenline structure for {fam}")


def _eigenline_fast(p: ModelPoint, sign: int) -> AlgebraElement | None:
    """Closed-form eigenline representative from a coordinate block."""
    fam = p.mid.family
    n = p.mid.spec.n
    pmid = _mid(p, Kind.P, sign)
    ps = md.payload_spec(pmid)
    s = float(sign)
    for which in (0, 1):
        if fam in (ModelFamily.O11, ModelFamily.AX, ModelFamily.OC):
            e = _e_block(ps, n, which)
            cand = e + al.mul(p.value, e) * s
        elif fam is ModelFamily.SP2:
            e = _e_block(ps, n, which)
            Jc = al.lift(p.value, ps)
            cand = e + al.unit_mul(al.mul(Jc, e), "i", side="left") * s
        elif fam is ModelFamily.SP2C:
            e = _e_block(ps, n, which)
            me = al.lift(al.mul(p.value, _e_block(p.value.spec, n, which)), ps)
            cand = e + al.unit_mul(me, "j") * s
        else:
            return None
        if md.is_regular(cand):
            return cand
    return None


def eigenline(p: ModelPoint, sign: int = 1) -> AlgebraElement:
    """Regular representative of the sign-labelled eigenline of a C-model
    point, over the payload spec of the line model.

    Eigenvalue conventions: J v = s v (indefinite families), J v = -s v i
    (symplectic family over the central extension), and J(v) = -s v j for
    the conjugate-linear quaternionic structure.
    """
    if p.mid.kind is not Kind.C:
        raise Unsupported("eigenline expects a C-model point")
    cand = _eigenline_fast(p, sign)
    if cand is not None:
        return cand
    pmid = _mid(p, Kind.P, sign)
    ps = md.payload_spec(pmid)
    n = p.mid.spec.n
    basis = _null_basis(ps, (2 * n, n, ps.dim), [_eigen_residual_fn(p, sign)])
    if not basis:
        raise KernelRankMismatch("eigen-residual kernel is trivial")
    return _regular_combination(basis)


def _partner_line(p: ModelPoint) -> AlgebraElement:
    """Representative of the opposite eigenline of the structure operator
    reconstructed from a line-model point."""
    fam = p.mid.family
    x = p.value
    if fam in (ModelFamily.O11, ModelFamily.AX, ModelFamily.OC):
        fn = lambda w: md.eval_form(md.Form.HFORM, x, w)
        basis = _null_basis(x.spec, x.coeffs.shape, [fn])
        if not basis:
            raise KernelRankMismatch("orthocomplement kernel is trivial")
        return _regular_combination(basis)
    if fam is ModelFamily.SP2:
        return al.apply_theta(x, "i")
    if fam is ModelFamily.SP2C:
        return al.apply_theta(x, "j")
    raise Unsupported(f"no structure reconstruction for {fam}")


# ----------------------------------------------------------------------
# primitive point maps


def _convert_c_to_p(p: ModelPoint, sign: int) -> ModelPoint:
    return ModelPoint(_mid(p, Kind.P, sign), eigenline(p, sign))


def _convert_p_to_c(p: ModelPoint) -> ModelPoint:
    fam = p.mid.family
    s = float(p.mid.sign)
    cmid = _mid(p, Kind.C, 1)
    cps = md.payload_spec(cmid)
    x = p.value
    if fam in (ModelFamily.O11, ModelFamily.AX, ModelFamily.OC):
        xm = _partner_line(p)
        B = _hstack(x, xm)
        J = al.mul(_hstack(x * s, xm * (-s)), al.inv(B))
        return ModelPoint(cmid, J)
    if fam is ModelFamily.SP2:
        xm = al.apply_theta(x, "i")
        B = _hstack(x, xm)
        img = _hstack(al.unit_mul(x, "i") * (-s), al.unit_mul(xm, "i") * s)
        Jc = al.mul(img, al.inv(B))
        return ModelPoint(cmid, al.restrict(Jc, cps, tol=1e-6))
    if fam is ModelFamily.SP2C:
        u, v = al.split(x, "j")
        B = _hstack(al.apply_theta(u, "i"), al.apply_theta(v, "i"))
        M = al.mul(_hstack(v * s, u * (-s)), al.inv(B))
        return ModelPoint(cmid, M)
    raise Unsupported(f"no structure model for {fam}")


def _convert_p_to_u(p: ModelPoint) -> ModelPoint:
    x1, x2 = gr.pair(p.value)
    if not al.is_invertible(x2, tol=1e-10):
        raise NonTransverse("line meets the chart's hyperplane at infinity")
    return ModelPoint(_mid(p, Kind.U, p.mid.sign), al.mul(x1, al.inv(x2)))


def _convert_u_to_p(p: ModelPoint) -> ModelPoint:
    e = al.eye(p.value.spec, p.mid.spec.n)
    return ModelPoint(_mid(p, Kind.P, p.mid.sign), gr.stack_pair(p.value, e))


def _convert_p_to_b(p: ModelPoint) -> ModelPoint:
    cj = _chart_conjugator(p.mid)
    y = al.mul(al.inv(cj), p.value)
    y1, y2 = gr.pair(y)
    if not al.is_invertible(y2, tol=1e-10):
        raise NonTransverse("line meets the bounded chart's hyperplane at infinity")
    return ModelPoint(_mid(p, Kind.B, 1), al.mul(y1, al.inv(y2)))


def _convert_b_to_p(p: ModelPoint, sign: int) -> ModelPoint:
    cj = _chart_conjugator(p.mid)
    e = al.eye(p.value.spec, p.mid.spec.n)
    x = al.mul(cj, gr.stack_pair(p.value, e))
    return ModelPoint(_mid(p, Kind.P, sign), x)


def _convert_u_to_b(p: ModelPoint) -> ModelPoint:
    cj = _chart_conjugator(p.mid)
    return ModelPoint(_mid(p, Kind.B, 1), md._moebius(al.inv(cj), p.value))


def _convert_b_to_u(p: ModelPoint, sign: int) -> ModelPoint:
    cj = _chart_conjugator(p.mid)
    return ModelPoint(_mid(p, Kind.U, sign), md._moebius(cj, p.value))


def convert(p: ModelPoint, to: ModelId) -> ModelPoint:
    """Convert a model point along the (possibly composite) edge to the
    target model of the same family and base algebra."""
    if to.family is not p.mid.family or to.spec != p.mid.spec:
        raise Unsupported("conversion requires the same family and base algebra")
    if p.mid.family in md._CPT:
        if to.kind is Kind.P:
            return ModelPoint(to, p.value.copy())
        raise Unsupported("compact families only have a line model")
    cur = p
    for frm, tkind in route(p.mid.kind, to.kind):
        if (frm, tkind) == (Kind.C, Kind.P):
            cur = _convert_c_to_p(cur, to.sign if to.kind in md._SIGNED_KINDS else 1)
        elif (frm, tkind) == (Kind.P, Kind.C):
            cur = _convert_p_to_c(cur)
        elif (frm, tkind) == (Kind.P, Kind.U):
            cur = _convert_p_to_u(cur)
        elif (frm, tkind) == (Kind.U, Kind.P):
            cur = _convert_u_to_p(cur)
        elif (frm, tkind) == (Kind.P, Kind.B):
            cur = _convert_p_to_b(cur)
        elif (frm, tkind) == (Kind.B, Kind.P):
            cur = _convert_b_to_p(cur, to.sign if to.kind in md._SIGNED_KINDS else 1)
        elif (frm, tkind) == (Kind.U, Kind.B):
            cur = _convert_u_to_b(cur)
        elif (frm, tkind) == (Kind.B, Kind.U):
            cur = _convert_b_to_u(cur, to.sign)
        else:  # pragma: no cover
            raise Unsupported(f"edge {frm} -> {tkind}")
    if cur.mid != to:
        cur = ModelPoint(to, cur.value)
    return cur


# ----------------------------------------------------------------------
# primitive differentials


def _d_c_to_p(fam: ModelFamily, L: AlgebraElement, x: AlgebraElement, sign: int) -> AlgebraElement:
    """Differential of the eigenline map applied at a representative x."""
    s = float(sign)
    if fam in (ModelFamily.O11, ModelFamily.AX, ModelFamily.OC):
        return al.mul(L, x) * (s / 2.0)
    if fam is ModelFamily.SP2:
        Lc = al.lift(L, x.spec)
        return al.unit_mul(al.mul(Lc, x), "i", side="left") * (s / 2.0)
    if fam is ModelFamily.SP2C:
        # L stays over the central extension: the conjugate-linear action
        # multiplies the j-components of x, which live over that extension
        return al.unit_mul(_quat_apply(L, x), "j") * (s / 2.0)
    raise Unsupported(f"no structure model for {fam}")


def _diff_c_to_p(t: TangentVector, sign: int) -> TangentVector:
    p_new = _convert_c_to_p(t.point, sign)
    v_new = _d_c_to_p(t.mid.family, t.value, p_new.value, sign)
    return TangentVector(p_new.mid, p_new, v_new)


def _diff_p_to_c(t: TangentVector) -> TangentVector:
    """Inverse differential by solving the forward formula modulo the
    line-class directions."""
    p = t.point
    x = p.value
    sign = p.mid.sign
    jp = _convert_p_to_c(p)
    fns = md.geometric_tangent_fns(jp)
    basis = _null_basis(jp.value.spec, jp.value.coeffs.shape, fns)
    if not basis:
        raise NotTangent("structure model has no tangent directions")
    def canon(w):
        return al._colstack(class_project(x, w)).reshape(-1)

    cols = np.stack([canon(_d_c_to_p(p.mid.family, Lk, x, sign)) for Lk in basis], axis=1)
    rhs = canon(t.value)
    coef, *_ = np.linalg.lstsq(cols, rhs, rcond=None)
    resid = np.linalg.norm(cols @ coef - rhs)
    if resid > 1e-6 * max(1.0, np.linalg.norm(rhs)):
        raise NotTangent("vector is not tangent to the line model")
    L = AlgebraElement(jp.value.spec, sum(c * b.coeffs for c, b in zip(coef, basis)))
    return TangentVector(jp.mid, jp, L)


def _diff_p_to_u(t: TangentVector) -> TangentVector:
    p_new = _convert_p_to_u(t.point)
    x1, x2 = gr.pair(t.point.value)
    v1, v2 = gr.pair(t.value)
    x2i = al.inv(x2)
    v_new = al.mul(v1 - al.mul(p_new.value, v2), x2i)
    return TangentVector(p_new.mid, p_new, v_new)


def _diff_u_to_p(t: TangentVector) -> TangentVector:
    p_new = _convert_u_to_p(t.point)
    z = al.zeros(t.value.spec, t.mid.spec.n)
    return TangentVector(p_new.mid, p_new, gr.stack_pair(t.value, z))


def _diff_p_to_b(t: TangentVector) -> TangentVector:
    p_new = _convert_p_to_b(t.point)
    cj_inv = al.inv(_chart_conjugator(t.mid))
    y = al.mul(cj_inv, t.point.value)
    w = al.mul(cj_inv, t.value)
    y1, y2 = gr.pair(y)
    w1, w2 = gr.pair(w)
    v_new = al.mul(w1 - al.mul(p_new.value, w2), al.inv(y2))
    return TangentVector(p_new.mid, p_new, v_new)


def _diff_b_to_p(t: TangentVector, sign: int) -> TangentVector:
    p_new = _convert_b_to_p(t.point, sign)
    cj = _chart_conjugator(t.mid)
    z = al.zeros(t.value.spec, t.mid.spec.n)
    v_new = al.mul(cj, gr.stack_pair(t.value, z))
    return TangentVector(p_new.mid, p_new, v_new)


def _diff_u_to_b(t: TangentVector) -> TangentVector:
    p_new = _convert_u_to_b(t.point)
    cj_inv = al.inv(_chart_conjugator(t.mid))
    v_new = md._moebius_tangent(cj_inv, t.point.value, t.value)
    return TangentVector(p_new.mid, p_new, v_new)


def _diff_b_to_u(t: TangentVector, sign: int) -> TangentVector:
    p_new = _convert_b_to_u(t.point, sign)
    cj = _chart_conjugator(t.mid)
    v_new = md._moebius_tangent(cj, t.point.value, t.value)
    return TangentVector(p_new.mid, p_new, v_new)


def differential(p: ModelPoint, v: AlgebraElement, to: ModelId) -> TangentVector:
    """Pushforward of the tangent vector v at p along the conversion."""
    if to.family is not p.mid.family or to.spec != p.mid.spec:
        raise Unsupported("conversion requires the same family and base algebra")
    cur = TangentVector(p.mid, p, v)
    if p.mid.family in md._CPT:
        if to.kind is Kind.P:
            return TangentVector(to, ModelPoint(to, p.value.copy()), v.copy())
        raise Unsupported("compact families only have a line model")
    for frm, tkind in route(p.mid.kind, to.kind):
        if (frm, tkind) == (Kind.C, Kind.P):
            cur = _diff_c_to_p(cur, to.sign if to.kind in md._SIGNED_KINDS else 1)
        elif (frm, tkind) == (Kind.P, Kind.C):
            cur = _diff_p_to_c(cur)
        elif (frm, tkind) == (Kind.P, Kind.U):
            cur = _diff_p_to_u(cur)
        elif (frm, tkind) == (Kind.U, Kind.P):
            cur = _diff_u_to_p(cur)
        elif (frm, tkind) == (Kind.P, Kind.B):
            cur = _diff_p_to_b(cur)
        elif (frm, tkind) == (Kind.B, Kind.P):
            cur = _diff_b_to_p(cur, to.sign if to.kind in md._SIGNED_KINDS else 1)
        elif (frm, tkind) == (Kind.U, Kind.B):
            cur = _diff_u_to_b(cur)
        elif (frm, tkind) == (Kind.B, Kind.U):
            cur = _diff_b_to_u(cur, to.sign)
        else:  # pragma: no cover
            raise Unsupported(f"edge {frm} -> {tkind}")
    if cur.mid != to:
        cur = TangentVector(to, ModelPoint(to, cur.point.value), cur.value)
    return cur


# ----------------------------------------------------------------------
# canonical tangent coordinates (symplectic family, structure model)


@dataclass
class CanonicalCoords:
    """Canonical coordinates of a tangent vector at a structure point of
    the symplectic family: the line coordinate l with r*l symmetric over
    the central extension, and the split components (a_plus, a_minus)
    expressing the operator in a normalized eigenbasis."""

    r: AlgebraElement
    l: AlgebraElement
    a_plus: AlgebraElement
    a_minus: AlgebraElement
    v_plus: AlgebraElement
    v_minus: AlgebraElement


def _normalized_eigenbasis(p: ModelPoint) -> tuple[AlgebraElement, AlgebraElement]:
    """Eigenline representatives (v+, v-) over the central extension with
    pairing omega_C(v+, v-) = 1."""
    vp = eigenline(p, 1)
    flip = 1.0
    vm = al.unit_mul(al.apply_theta(vp, "i"), "i")
    c = md.eval_form(md.Form.OMEGA, vp, vm)
    cb = AlgebraElement(md.spec_c_bar(p.mid.spec), c.coeffs)
    if al.is_positive(cb) is not al.Sign.POSITIVE:
        flip, cb = -1.0, -cb
    u = al.sqrt_positive(al.inv(cb))
    u = AlgebraElement(vp.spec, u.coeffs)
    vp = al.mul(vp, al.apply_theta(u, "i"))
    vm = al.unit_mul(al.apply_theta(vp, "i"), "i") * flip
    return vp, vm


def canonical_tangent_coords(p: ModelPoint, L: AlgebraElement) -> CanonicalCoords:
    """Canonical coordinates of a tangent vector at a structure point of
    the symplectic family."""
    if p.mid.family is not ModelFamily.SP2 or p.mid.kind is not Kind.C:
        raise Unsupported("canonical coordinates are defined for the symplectic structure model")
    if not md.tangent_contains(TangentVector(p.mid, p, L), tol=1e-7):
        raise NotTangent("vector fails the structure-model tangency conditions")
    spec = p.value.spec
    n = p.mid.spec.n
    cspec = md.spec_c(p.mid.spec)
    e1 = _e_block(spec, n, 0)
    # line coordinate: solve [x | J x] (a; b) = L x, l = a + i b
    x = e1
    jx = al.mul(p.value, x)
    B = _hstack(x, jx)
    ab = al.solve_left(B, al.mul(L, x))
    a = AlgebraElement(spec, ab.coeffs[:n])
    b = AlgebraElement(spec, ab.coeffs[n:])
    l = al.join(a, b, "i", cspec)
    r = md.eval_form(md.Form.OMEGA, jx, x)
    # split coordinates in the normalized eigenbasis
    vp, vm = _normalized_eigenbasis(p)
    Lc = al.lift(L, cspec)
    B2 = _hstack(vp, vm)
    anti = al.solve_left(B2, al.mul(Lc, B2))
    a_min = AlgebraElement(cspec, anti.coeffs[:n, n:])
    a_plus = AlgebraElement(cspec, anti.coeffs[n:, :n])
    return CanonicalCoords(r=r, l=l, a_plus=a_plus, a_minus=a_min, v_plus=vp, v_minus=vm)


def splitting_map(L: AlgebraElement, cspec: AlgebraSpec) -> AlgebraElement:
    """Projection of a complexified tangent operator onto its linear part:
    (1/2)(Lc + theta_i(Lc) - i Lc + i theta_i(Lc))."""
    Lc = al.lift(L, cspec) if L.spec.tower != cspec.tower else L
    Lt = al.apply_theta(Lc, "i")
    return (Lc + Lt - al.unit_mul(Lc, "i", side="left") + al.unit_mul(Lt, "i", side="left")) * 0.5


def is_well_conditioned(p: ModelPoint, bound: float = 50.0) -> bool:
    """Do the point and all its chart images stay below the norm bound?
    Points failing this sit near the boundary of the space, where the
    chart transitions are genuinely ill-conditioned."""
    if p.value.norm() > bound:
        return False
    kinds = [Kind.C, Kind.P, Kind.U, Kind.B]
    try:
        return all(
            convert(p, _mid(p.mid, k, p.mid.sign)).value.norm() <= bound
            for k in kinds
            if not (k is Kind.B and p.mid.sign == -1)
        )
    except Exception:  # noqa: BLE001 - any chart failure means ill-conditioned
        return False


def sample_well_conditioned(mid: ModelId, rng=None, bound: float = 50.0, tries: int = 64) -> ModelPoint:
    """Random model point whose images in every chart stay below the given
    norm bound (keeps finite-difference comparisons well-conditioned away
    from the boundary of the space)."""
    rng = np.random.default_rng(rng)
    for _ in range(tries):
        p = md.sample_point(mid, rng)
        if is_well_conditioned(p, bound):
            return p
    raise StepTooLarge("no well-conditioned sample found")


# ----------------------------------------------------------------------
# finite-difference oracle


def _retract_curve(p: ModelPoint, v: AlgebraElement, t: float) -> ModelPoint:
    """Point on a curve through p with velocity v that stays in the model
    to high order (exact retraction for the structure models)."""
    mid = p.mid
    moved = p.value + v * t
    if mid.kind is Kind.C:
        if mid.family is ModelFamily.SP2C:
            corr = al.eye(moved.spec, moved.shape[0]) + al.mul(v, al.apply_theta(v, "i")) * (t * t / 2.0)
            moved = al.mul(corr, moved)
        else:
            eps = 1.0 if mid.family in (ModelFamily.O11, ModelFamily.AX, ModelFamily.OC) else -1.0
            corr = al.eye(moved.spec, moved.shape[0]) - al.mul(v, v) * (eps * t * t / 2.0)
            moved = al.mul(moved, corr)
    return ModelPoint(mid, moved)


def differential_fd(p: ModelPoint, v: AlgebraElement, to: ModelId, h: float = 1e-5) -> TangentVector:
    """Central-difference pushforward with one Richardson extrapolation
    level; independent oracle for ``differential`` (tests only)."""
    target = convert(p, to)

    def diff(step):
        try:
            plus = convert(_retract_curve(p, v, step), to).value
            minus = convert(_retract_curve(p, v, -step), to).value
        except Exception as exc:  # noqa: BLE001 - surface as oracle failure
            raise StepTooLarge(f"finite-difference step left the chart: {exc}") from exc
        return (plus - minus) * (1.0 / (2.0 * step))

    d1 = diff(h)
    d2 = diff(h / 2.0)
    val = (d2 * 4.0 - d1) * (1.0 / 3.0)
    return TangentVector(target.mid, target, val)
