"""Unit tests for the group layer: defining relations, Lie algebras,
Cartan decomposition, conjugators, and transporters."""

import numpy as np
import pytest

from symspaces import algebra as al
from symspaces import groups as gr
from symspaces import models as md
from symspaces.errors import NotInGroup


def spec2():
    return al.make_spec(2)


GIDS = [
    gr.GroupId(gr.Family.SP2, spec2()),
    gr.GroupId(gr.Family.O11, spec2()),
    gr.GroupId(gr.Family.AX_HAT, spec2()),
    gr.GroupId(gr.Family.OC_HAT, spec2()),
    gr.GroupId(gr.Family.SP2, md.spec_c(spec2())),
    gr.GroupId(gr.Family.O11, md.spec_c_bar(spec2())),
]


@pytest.mark.parametrize("gid", GIDS, ids=lambda g: f"{g.family.value}-{g.spec.tower.ext}")
def test_group_closure_and_inverse(gid):
    rng = np.random.default_rng(11)
    for _ in range(5):
        g = gr.sample_group(gid, rng)
        h = gr.sample_group(gid, rng)
        scale = max(1.0, g.norm() ** 2 * h.norm() ** 2)
        assert max(gr.group_residuals(gid, al.mul(g, h)).values()) < 1e-9 * scale
        assert max(gr.group_residuals(gid, al.inv(g)).values()) < 1e-9 * scale


@pytest.mark.parametrize("gid", GIDS, ids=lambda g: f"{g.family.value}-{g.spec.tower.ext}")
def test_lie_algebra_exponentiates_into_group(gid):
    rng = np.random.default_rng(12)
    if gid.family in (gr.Family.AX_HAT, gr.Family.OC_HAT):
        xi = gr.sample_compact_lie(gid, rng, scale=0.4)
    else:
        xi = gr.sample_lie(gid, rng, scale=0.4)
        assert gr.lie_contains(gid, xi)
    g = gr.exp_lie(xi)
    assert max(gr.group_residuals(gid, g).values()) < 1e-9 * max(1.0, g.norm() ** 2)


@pytest.mark.parametrize(
    "gid",
    [gr.GroupId(gr.Family.SP2, spec2()), gr.GroupId(gr.Family.O11, spec2())],
    ids=lambda g: g.family.value,
)
def test_cartan_bracket_relations(gid):
    rng = np.random.default_rng(13)

    def brk(a, b):
        return al.mul(a, b) - al.mul(b, a)

    for _ in range(10):
        x1, x2 = gr.sample_lie(gid, rng), gr.sample_lie(gid, rng)
        k1, m1 = gr.cartan_project(gid, x1)
        k2, m2 = gr.cartan_project(gid, x2)
        assert (k1 + m1 - x1).norm() < 1e-12
        s = max(1.0, x1.norm() * x2.norm())
        assert gr.cartan_project(gid, brk(k1, k2))[1].norm() < 1e-10 * s
        assert gr.cartan_project(gid, brk(k1, m2))[0].norm() < 1e-10 * s
        assert gr.cartan_project(gid, brk(m1, m2))[1].norm() < 1e-10 * s


def test_compact_lie_elements_are_antisymmetric_under_cartan():
    rng = np.random.default_rng(14)
    for fam in (gr.Family.KSP2, gr.Family.KO11, gr.Family.AX_HAT, gr.Family.OC_HAT):
        base = gr.Family.SP2 if fam is gr.Family.KSP2 else gr.Family.O11
        gid = gr.GroupId(fam, spec2())
        xi = gr.sample_compact_lie(gid, rng)
        if fam in (gr.Family.KSP2, gr.Family.KO11):
            k, m = gr.cartan_project(gr.GroupId(base, spec2()), xi)
            assert m.norm() < 1e-12
        g = gr.exp_lie(xi)
        res = gr.group_residuals(gr.GroupId(fam, spec2()), g)
        assert max(res.values()) < 1e-9


def test_conjugator_incarnation_o11_to_sp2():
    # a fixed invertible matrix conjugates the split-orthogonal group of the
    # conjugate-linear complexification onto the symplectic group
    scb = md.spec_c_bar(spec2())
    S = al.AlgebraElement(scb, gr.conjugator("S", spec2()).coeffs)
    o11 = gr.GroupId(gr.Family.O11, scb)
    sp2 = gr.GroupId(gr.Family.SP2, scb)
    rng = np.random.default_rng(15)
    for _ in range(5):
        g = gr.sample_group(o11, rng)
        h = al.mul(al.mul(S, g), al.inv(S))
        assert max(gr.group_residuals(sp2, h).values()) < 1e-9 * max(1.0, h.norm() ** 2)
        g2 = al.mul(al.mul(al.inv(S), gr.sample_group(sp2, rng)), S)
        assert max(gr.group_residuals(o11, g2).values()) < 1e-9 * max(1.0, g2.norm() ** 2)


def test_transporter_moves_basepoint():
    rng = np.random.default_rng(16)
    gid = gr.GroupId(gr.Family.SP2, spec2())
    x = al.sample(spec2(), "sym", rng)
    y = al.sample(spec2(), "positive", rng)
    t = gr.transporter(gid, x, y)
    assert max(gr.group_residuals(gid, t).values()) < 1e-9
    # upper-triangular: lower-left block vanishes
    assert gr.blocks(t)[2].norm() < 1e-14


def test_group_contains_rejects_non_members():
    gid = gr.GroupId(gr.Family.SP2, spec2())
    bad = al.sample(gid.spec, "free", np.random.default_rng(17), rows=4)
    assert not gr.group_contains(gid, bad)
