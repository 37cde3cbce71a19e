"""Pointwise invariant data of Higgs fields.

Two families of Higgs data are supported: quaternionic data q fixed by the
linear involution of the half-extension (complexified by an extra central
unit), and complex-orthogonal data q anti-fixed by the extended involution.
The norm map sends q to q * sigma_1(q) (quaternionic) or to -q^2
(orthogonal); its conjugation class is encoded concretely by the monic
characteristic-polynomial coefficients of the complex embedding.

The classical rank-2 worked example builds the 4x4 Higgs field from a
quadratic and a quartic coefficient and recovers them from trace powers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import algebra as al
from . import groups as gr
from . import models as md
from .algebra import AlgebraElement, AlgebraSpec
from .errors import NotPattern, ShapeMismatch, Unsupported

_PATTERN_TOL = 1e-10


class HiggsFamily(enum.Enum):
    SP2C = "sp2c"
    OC = "oc"


def higgs_spec(family: HiggsFamily, spec: AlgebraSpec) -> AlgebraSpec:
    """Coefficient spec of a Higgs datum over the given base algebra."""
    if spec.tower.ext != "none" or spec.tower.central:
        raise Unsupported("Higgs data are specified over the unextended base algebra")
    if family is HiggsFamily.SP2C:
        return al.add_central(md.spec_h(spec))
    if family is HiggsFamily.OC:
        return md.spec_c(spec)
    raise Unsupported(str(family))


@dataclass
class HiggsVector:
    """A Higgs datum: family tag plus its square coefficient element."""

    family: HiggsFamily
    q: AlgebraElement

    def __post_init__(self):
        r = pattern_residual(self.family, self.q)
        if r > _PATTERN_TOL * max(1.0, self.q.norm()):
            raise NotPattern(f"symmetry-pattern residual {r:.3e}")


def pattern_residual(family: HiggsFamily, q: AlgebraElement) -> float:
    """Residual of the defining symmetry pattern of a Higgs datum."""
    if family is HiggsFamily.SP2C:
        return (al.apply_sigma(q) - q).norm()
    if family is HiggsFamily.OC:
        return (al.apply_sigma(q) + q).norm()
    raise Unsupported(str(family))


def _sigma1(q: AlgebraElement) -> AlgebraElement:
    """The *-involution of the half-extension, extended linearly over the
    central unit."""
    return al.apply_theta(al.apply_theta(al.apply_sigma(q), "i"), "j")


def norm_value(hv: HiggsVector) -> AlgebraElement:
    """Un-quotiented norm of the Higgs datum: q * sigma_1(q), or -q^2 for
    the orthogonal family."""
    if hv.family is HiggsFamily.SP2C:
        return al.mul(hv.q, _sigma1(hv.q))
    return -al.mul(hv.q, hv.q)


def invariants(hv: HiggsVector) -> list[complex]:
    """Monic characteristic-polynomial coefficients of the embedded norm
    value, in degree order (constant term last)."""
    e = al.embed_complex(norm_value(hv))
    coeffs = np.poly(e)
    return [complex(c) for c in coeffs[1:]]


def trace_powers(L: AlgebraElement, dmax: int) -> list[complex]:
    """Reduced traces of the even powers L^(2d), d = 1..dmax, computed in
    the embedded representation."""
    e = al.embed_complex(L)
    scale = L.shape[0] / e.shape[0]
    sq = e @ e
    out = []
    acc = np.eye(e.shape[0], dtype=complex)
    for _ in range(dmax):
        acc = acc @ sq
        out.append(complex(np.trace(acc) * scale))
    return out


# ----------------------------------------------------------------------
# compact congruence action


def sample_compact(family: HiggsFamily, spec: AlgebraSpec, rng) -> AlgebraElement:
    """Random compact element acting on Higgs data by congruence: a
    unitary quaternionic scalar (as an element of the half-extension) or
    an orthogonal element of the base algebra."""
    rng = np.random.default_rng(rng)
    if family is HiggsFamily.OC:
        k = gr.exp_lie(al.sample(spec, "antisym", rng))
        return al.lift(k, md.spec_c(spec))
    cspec = md.spec_c(spec)
    kmat = gr.exp_lie(gr.sample_compact_lie(gr.GroupId(gr.Family.KSP2C, cspec), rng))
    a, b = gr.blocks(kmat)[0], gr.blocks(kmat)[1]
    kh = al.join(a, b, "j", md.spec_h(spec))
    return al.lift(kh, al.add_central(md.spec_h(spec)))


def congruence(k: AlgebraElement, hv: HiggsVector) -> HiggsVector:
    """Congruence action k . q = k q sigma(k) preserving the pattern."""
    return HiggsVector(hv.family, al.mul(al.mul(k, hv.q), al.apply_sigma(k)))


# ----------------------------------------------------------------------
# classical rank-2 worked example


def hkr_sp4(q2: float, q4: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Higgs field of the rank-2 section from a quadratic and a quartic
    coefficient; returns (beta, gamma, L) with L = [[0, beta], [gamma, 0]]."""
    beta = np.array([[q4, q2], [q2, 1.0]])
    gamma = np.array([[0.0, 1.0], [1.0, 0.0]])
    L = np.zeros((4, 4))
    L[:2, 2:] = beta
    L[2:, :2] = gamma
    return beta, gamma, L


def hkr_recover(L: np.ndarray) -> tuple[float, float]:
    """Invert the trace identities Tr L^2 = 4 q2, Tr L^4 = 4 (q2^2 + q4)."""
    L = np.asarray(L, dtype=float)
    if L.shape != (4, 4):
        raise ShapeMismatch("expected a 4x4 matrix")
    L2 = L @ L
    q2 = np.trace(L2) / 4.0
    q4 = np.trace(L2 @ L2) / 4.0 - q2 * q2
    return float(q2), float(q4)
