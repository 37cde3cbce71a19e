"""Unit tests for the four model realizations: membership, the group
action, tangent spaces, the invariant metric, and transporters."""

import numpy as np
import pytest

from symspaces import algebra as al
from symspaces import groups as gr
from symspaces import models as md
from symspaces.errors import NotInModel, Unsupported

from conftest import KINDS, MODEL_FAMS, mid2


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
@pytest.mark.parametrize("sign", [1, -1])
def test_basepoint_and_sampling(fam, kind, sign):
    if kind not in md._SIGNED_KINDS and sign == -1:
        pytest.skip("unsigned kind")
    mid = mid2(fam, kind, sign)
    b = md.basepoint(mid)
    assert md.contains(b)
    p = md.sample_point(mid, np.random.default_rng(20))
    assert md.contains(p, tol=1e-8)


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_action_preserves_model(fam, kind):
    mid = mid2(fam, kind)
    rng = np.random.default_rng(21)
    p = md.sample_point(mid, rng)
    g = gr.sample_group(md.group_for(mid), rng, scale=0.4)
    q = md.act(g, p)
    assert md.contains(q, tol=1e-7)
    # action by a product equals the composed action
    h = gr.sample_group(md.group_for(mid), rng, scale=0.4)
    lhs = md.act(al.mul(g, h), p)
    rhs = md.act(g, md.act(h, p))
    if kind is md.Kind.P:
        assert md.line_equal(lhs.value, rhs.value)
    else:
        assert (lhs.value - rhs.value).norm() < 1e-8 * max(1.0, rhs.value.norm())


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_tangent_sampling_and_action(fam, kind):
    mid = mid2(fam, kind)
    rng = np.random.default_rng(22)
    p = md.sample_point(mid, rng)
    t = md.sample_tangent(p, rng)
    assert md.tangent_contains(t, tol=1e-7)
    g = gr.sample_group(md.group_for(mid), rng, scale=0.4)
    t2 = md.act_tangent(g, t)
    assert md.tangent_contains(t2, tol=1e-6)


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
def test_metric_invariance_and_positivity(fam):
    mid = mid2(fam, md.Kind.U)
    rng = np.random.default_rng(23)
    p = md.sample_point(mid, rng)
    v = md.sample_tangent(p, rng).value
    w = md.sample_tangent(p, rng).value
    g = gr.sample_group(md.group_for(mid), rng, scale=0.4)
    tv = md.act_tangent(g, md.TangentVector(mid, p, v))
    tw = md.act_tangent(g, md.TangentVector(mid, p, w))
    before = md.metric(p, v, w)
    after = md.metric(tv.point, tv.value, tw.value)
    assert abs(before - after) < 1e-8 * max(1.0, abs(before))
    assert md.metric(p, v, v) > 0
    # at the base point the pairing reduces to the flat trace form
    b = md.basepoint(mid)
    vb = md.sample_tangent(b, rng).value
    wb = md.sample_tangent(b, rng).value
    assert abs(md.metric(b, vb, wb) - md.metric_base(b, vb, wb)) < 1e-10


@pytest.mark.parametrize("fam", MODEL_FAMS, ids=lambda f: f.value)
def test_transporter_reaches_point(fam):
    mid = mid2(fam, md.Kind.U)
    rng = np.random.default_rng(24)
    p = md.sample_point(mid, rng)
    t = md.transporter_to(p)
    moved = md.act(t.mat, md.basepoint(mid))
    assert (moved.value - p.value).norm() < 1e-8 * max(1.0, p.value.norm())
    assert max(gr.group_residuals(t.gid, t.mat).values()) < 1e-8 * max(1.0, t.mat.norm() ** 2)


def test_transporter_rejects_other_kinds():
    mid = mid2(md.ModelFamily.SP2, md.Kind.C)
    p = md.sample_point(mid, 0)
    with pytest.raises(Unsupported):
        md.transporter_to(p)


def test_contains_rejects_wrong_sign():
    mid_plus = mid2(md.ModelFamily.SP2, md.Kind.U, 1)
    mid_minus = mid2(md.ModelFamily.SP2, md.Kind.U, -1)
    p = md.sample_point(mid_plus, 0)
    q = md.ModelPoint(mid_minus, p.value)
    assert not md.contains(q)


@pytest.mark.parametrize(
    "fam",
    [md.ModelFamily.CPT_KO11, md.ModelFamily.CPT_KSP2, md.ModelFamily.CPT_KSP2C],
    ids=lambda f: f.value,
)
def test_compact_line_models(fam):
    mid = md.ModelId(fam, md.Kind.P, al.make_spec(2), 1)
    b = md.basepoint(mid)
    assert md.contains(b)
    p = md.sample_point(mid, np.random.default_rng(25))
    assert md.contains(p, tol=1e-8)


def test_geometric_tangent_dimension_matches_group_orbit():
    # the geometric tangent space at a fixed-point model point has the
    # dimension of the symmetric space: dim G - dim K
    for fam, dim in [
        (md.ModelFamily.O11, 4),
        (md.ModelFamily.AX, 3),
        (md.ModelFamily.OC, 1),
    ]:
        mid = mid2(fam, md.Kind.C)
        p = md.sample_point(mid, np.random.default_rng(26))
        fns = md.geometric_tangent_fns(p)
        ps = p.value.spec
        coords = []
        k = ps.dim * p.value.shape[0] * p.value.shape[1]
        rows = []
        for idx in range(k):
            c = np.zeros(k)
            c[idx] = 1.0
            probe = al.AlgebraElement(ps, c.reshape(p.value.coeffs.shape))
            rows.append(np.concatenate([al._colstack(f(probe)).ravel() for f in fns]))
        m = np.array(rows).T
        null_dim = k - np.linalg.matrix_rank(m, tol=1e-8)
        assert null_dim == dim, (fam, null_dim)
