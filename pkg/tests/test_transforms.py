"""Unit tests for model conversions and their differentials.

The independent oracle for every differential is a Richardson-refined
central finite difference along model curves."""

import numpy as np
import pytest

from symspaces import algebra as al
from symspaces import groups as gr
from symspaces import models as md
from symspaces import transforms as tf
from symspaces.errors import NotTangent, Unsupported

from conftest import KINDS, MODEL_FAMS, mid2

EDGES = [(a, b) for a in KINDS for b in KINDS if a is not b]


def _mismatch(p, q):
    if p.mid.kind is md.Kind.P:
        return 0.0 if md.line_equal(p.value, q.value) else 1.0
    return (p.value - q.value).norm() / max(1.0, q.value.norm())


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
@pytest.mark.parametrize("sign", [1, -1])
def test_basepoints_convert_to_basepoints(fam, sign):
    for kf, kt in EDGES:
        if sign == -1 and md.Kind.B in (kf, kt):
            # the bounded chart only covers the positive component
            continue
        b = md.basepoint(mid2(fam, kf, sign))
        out = tf.convert(b, mid2(fam, kt, sign))
        ref = md.basepoint(mid2(fam, kt, sign))
        assert _mismatch(out, ref) < 1e-12, (fam, kf, kt, sign)


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
@pytest.mark.parametrize("edge", EDGES, ids=lambda e: f"{e[0].value}->{e[1].value}")
def test_roundtrip_and_membership(fam, edge):
    kf, kt = edge
    rng = np.random.default_rng(30)
    p = md.sample_point(mid2(fam, kf), rng)
    out = tf.convert(p, mid2(fam, kt))
    assert md.contains(out, tol=1e-7)
    back = tf.convert(out, mid2(fam, kf))
    assert _mismatch(back, p) < 1e-8


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
def test_conversion_equivariance(fam):
    rng = np.random.default_rng(31)
    for kf, kt in EDGES:
        mid_f, mid_t = mid2(fam, kf), mid2(fam, kt)
        p = md.sample_point(mid_f, rng)
        g = gr.sample_group(md.group_for(mid_f), rng, scale=0.4)
        lhs = tf.convert(md.act(g, p), mid_t)
        rhs = md.act(g, tf.convert(p, mid_t))
        assert _mismatch(lhs, rhs) < 1e-7, (fam, kf, kt)


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
def test_triangle_composite_agrees(fam):
    rng = np.random.default_rng(32)
    p = md.sample_point(mid2(fam, md.Kind.U), rng)
    direct = tf.convert(p, mid2(fam, md.Kind.B))
    via_p = tf.convert(tf.convert(p, mid2(fam, md.Kind.P)), mid2(fam, md.Kind.B))
    assert (direct.value - via_p.value).norm() < 1e-8 * max(1.0, direct.value.norm())


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
@pytest.mark.parametrize("edge", EDGES, ids=lambda e: f"{e[0].value}->{e[1].value}")
def test_differential_matches_finite_difference(fam, edge):
    kf, kt = edge
    rng = np.random.default_rng(33)
    p = tf.sample_well_conditioned(mid2(fam, kf), rng)
    v = md.sample_tangent(p, rng).value
    ana = tf.differential(p, v, mid2(fam, kt))
    fd = tf.differential_fd(p, v, mid2(fam, kt))
    rel = tf.tangent_mismatch(ana, fd) / max(1.0, ana.value.norm())
    assert rel < 1e-5, (fam, kf, kt, rel)


def test_differential_chain_rule():
    fam = md.ModelFamily.SP2
    rng = np.random.default_rng(34)
    p = tf.sample_well_conditioned(mid2(fam, md.Kind.U), rng)
    v = md.sample_tangent(p, rng).value
    direct = tf.differential(p, v, mid2(fam, md.Kind.B))
    mid_stop = tf.differential(p, v, mid2(fam, md.Kind.P))
    via = tf.differential(mid_stop.point, mid_stop.value, mid2(fam, md.Kind.B))
    assert tf.tangent_mismatch(direct, via) < 1e-10 * max(1.0, direct.value.norm())


def test_differential_fd_quadratic_convergence():
    fam = md.ModelFamily.O11
    rng = np.random.default_rng(35)
    p = tf.sample_well_conditioned(mid2(fam, md.Kind.U), rng)
    v = md.sample_tangent(p, rng).value
    ref = tf.differential(p, v, mid2(fam, md.Kind.B))

    def err(h):
        # plain central difference (no Richardson) to expose the h^2 term
        to = mid2(fam, md.Kind.B)
        plus = tf.convert(tf._retract_curve(p, v, h), to)
        minus = tf.convert(tf._retract_curve(p, v, -h), to)
        fd = (plus.value - minus.value) / (2.0 * h)
        return (fd - ref.value).norm()

    e1, e2 = err(1e-3), err(5e-4)
    assert e1 / e2 == pytest.approx(4.0, rel=0.2)


def test_differential_rejects_non_tangent():
    # the line model of the one-dimensional family leaves room in the
    # quotient for plenty of non-tangent directions
    fam = md.ModelFamily.OC
    mid = mid2(fam, md.Kind.P)
    p = md.sample_point(mid, 1)
    bad = al.AlgebraElement(
        p.value.spec,
        np.random.default_rng(36).standard_normal(p.value.coeffs.shape),
    )
    with pytest.raises(NotTangent):
        tf.differential(p, bad, mid2(fam, md.Kind.C))


def test_eigenline_property():
    rng = np.random.default_rng(37)
    for fam in MODEL_FAMS:
        p = md.sample_point(mid2(fam, md.Kind.C), rng)
        for s in (1, -1):
            x = tf.eigenline(p, s)
            resid = tf._eigen_residual_fn(p, s)(x)
            assert resid.norm() < 1e-8 * max(1.0, x.norm()), (fam, s)


def test_canonical_tangent_coords_reconstruct():
    mid = mid2(md.ModelFamily.SP2, md.Kind.C)
    rng = np.random.default_rng(38)
    p = md.sample_point(mid, rng)
    L = md.sample_tangent(p, rng).value
    cc = tf.canonical_tangent_coords(p, L)
    cspec = cc.a_plus.spec
    # the off-diagonal block coefficients are sigma-fixed and swapped by
    # the complex conjugation of the extension
    assert (al.apply_sigma(cc.a_plus) - cc.a_plus).norm() < 1e-10
    assert (al.apply_theta(cc.a_plus, "i") - cc.a_minus).norm() < 1e-10
    # reconstruction: L acts on the normalized eigenbasis by the
    # antidiagonal block matrix of the coordinates
    b2 = tf._hstack(cc.v_plus, cc.v_minus)
    Lc = al.lift(L, cspec)
    lhs = al.mul(Lc, b2)
    n = cc.a_plus.shape[0]
    blocks = al.zeros(cspec, 2 * n)
    arr = blocks.coeffs.copy()
    arr[:n, n:] = cc.a_minus.coeffs
    arr[n:, :n] = cc.a_plus.coeffs
    rhs = al.mul(b2, al.AlgebraElement(cspec, arr))
    assert (lhs - rhs).norm() < 1e-9 * max(1.0, lhs.norm())


def test_splitting_map_projects_onto_tangents():
    mid = mid2(md.ModelFamily.SP2, md.Kind.C)
    rng = np.random.default_rng(39)
    p = md.sample_point(mid, rng)
    L = md.sample_tangent(p, rng).value
    back = tf.splitting_map(L, md.spec_c(al.make_spec(2)))
    assert (al.restrict(back, L.spec) - L).norm() < 1e-9 * max(1.0, L.norm())


def test_convert_identity_is_noop():
    mid = mid2(md.ModelFamily.AX, md.Kind.U)
    p = md.sample_point(mid, 2)
    q = tf.convert(p, mid)
    assert (q.value - p.value).norm() < 1e-14
