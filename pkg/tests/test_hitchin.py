"""Unit tests for Higgs data, their congruence action, norm values,
spectral invariants, and the rank-two recovery map.

The independent oracle for the recovery map is brute-force trace
computation on explicit 4x4 matrices."""

import numpy as np
import pytest

from symspaces import algebra as al
from symspaces import hitchin as hi
from symspaces.errors import NotPattern, ShapeMismatch, Unsupported


def spec2():
    return al.make_spec(2)


def sample_higgs(family, rng):
    pattern = "sym" if family is hi.HiggsFamily.SP2C else "antisym"
    q = al.sample(hi.higgs_spec(family, spec2()), pattern, rng)
    return hi.HiggsVector(family, q)


@pytest.mark.parametrize("family", list(hi.HiggsFamily), ids=lambda f: f.value)
def test_pattern_enforced(family):
    rng = np.random.default_rng(40)
    hv = sample_higgs(family, rng)
    assert hi.pattern_residual(hv.family, hv.q) < 1e-12
    wrong = "antisym" if family is hi.HiggsFamily.SP2C else "sym"
    bad = al.sample(hi.higgs_spec(family, spec2()), wrong, rng)
    with pytest.raises(NotPattern):
        hi.HiggsVector(family, bad)


@pytest.mark.parametrize("family", list(hi.HiggsFamily), ids=lambda f: f.value)
def test_norm_value_equivariance(family):
    rng = np.random.default_rng(41)
    for _ in range(5):
        hv = sample_higgs(family, rng)
        k = hi.sample_compact(family, spec2(), rng)
        lhs = hi.norm_value(hi.congruence(k, hv))
        rhs = al.mul(al.mul(k, hi.norm_value(hv)), al.inv(k))
        assert (lhs - rhs).norm() < 1e-10 * max(1.0, rhs.norm())


@pytest.mark.parametrize("family", list(hi.HiggsFamily), ids=lambda f: f.value)
def test_invariants_are_congruence_invariant(family):
    rng = np.random.default_rng(42)
    for _ in range(5):
        hv = sample_higgs(family, rng)
        k = hi.sample_compact(family, spec2(), rng)
        i1 = np.array(hi.invariants(hv))
        i2 = np.array(hi.invariants(hi.congruence(k, hv)))
        assert np.max(np.abs(i1 - i2)) < 1e-9 * max(1.0, np.max(np.abs(i1)))


@pytest.mark.parametrize("family", list(hi.HiggsFamily), ids=lambda f: f.value)
def test_invariants_match_embedded_char_poly(family):
    hv = sample_higgs(family, np.random.default_rng(43))
    e = al.embed_complex(hi.norm_value(hv))
    ref = np.poly(e)[1:]
    got = np.array(hi.invariants(hv))
    assert np.max(np.abs(got - ref)) < 1e-12


def test_trace_powers_match_embedding():
    hv = sample_higgs(hi.HiggsFamily.SP2C, np.random.default_rng(44))
    nv = hi.norm_value(hv)
    e = al.embed_complex(nv)
    tp = hi.trace_powers(nv, 4)
    scale = nv.shape[0] / e.shape[0]
    sq = e @ e
    m = np.eye(e.shape[0], dtype=complex)
    for d, val in enumerate(tp, start=1):
        m = m @ sq  # traces are reported for the even powers L^(2d)
        assert abs(val - np.trace(m) * scale) < 1e-10 * max(1.0, abs(val))


def test_higgs_spec_rejects_extended_bases():
    with pytest.raises(Unsupported):
        hi.higgs_spec(hi.HiggsFamily.SP2C, al.extend(spec2(), "c"))


def test_rank_two_identities_brute_force():
    rng = np.random.default_rng(45)
    for _ in range(20):
        q2, q4 = rng.uniform(-2.0, 2.0, 2)
        beta, gamma, L = hi.hkr_sp4(q2, q4)
        # brute-force oracle: explicit block matrix traces
        ref = np.block([[np.zeros((2, 2)), beta], [gamma, np.zeros((2, 2))]])
        assert np.linalg.norm(L - ref) < 1e-14
        L2 = L @ L
        assert abs(np.trace(L2) - 4.0 * q2) < 1e-10
        assert abs(np.trace(L2 @ L2) - 4.0 * (q2 * q2 + q4)) < 1e-10


def test_rank_two_recovery_roundtrip():
    rng = np.random.default_rng(46)
    for _ in range(20):
        q2, q4 = rng.uniform(-2.0, 2.0, 2)
        _, _, L = hi.hkr_sp4(q2, q4)
        r2, r4 = hi.hkr_recover(L)
        assert abs(r2 - q2) < 1e-12
        assert abs(r4 - q4) < 1e-12
    with pytest.raises(ShapeMismatch):
        hi.hkr_recover(np.eye(3))


def test_invariants_scaling_behavior():
    # scaling q by t scales the norm value by t^2 and the k-th invariant
    # by t^(2k)
    hv = sample_higgs(hi.HiggsFamily.OC, np.random.default_rng(47))
    t = 2.0
    hv2 = hi.HiggsVector(hv.family, hv.q * t)
    i1 = np.array(hi.invariants(hv))
    i2 = np.array(hi.invariants(hv2))
    powers = t ** (2 * np.arange(1, len(i1) + 1))
    assert np.max(np.abs(i2 - i1 * powers)) < 1e-9 * max(1.0, np.max(np.abs(i2)))
