"""Involutive matrix algebras over scalar towers.

An :class:`AlgebraSpec` fixes a matrix size ``n``, a scalar
:class:`~symspaces.tower.Tower` and a transpose-type anti-involution.
Elements are real coefficient arrays of shape ``(rows, cols, d)`` where
``d`` is the tower dimension; rows and cols are usually ``n`` (algebra
elements), ``2n`` (doubled matrices) or ``2n x n`` (stacked pairs).

Inversion goes through the left regular representation (a real linear
solve), and all spectral questions (positivity, square roots) go through
a faithful complex *-embedding built out of the classical identifications
of the quaternions with 2x2 complex blocks and of central units with the
complex scalar ``i`` (splitting into block pairs when several central
units are present).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import (
    NotHermitianPair,
    NotPositive,
    ShapeMismatch,
    Singular,
    SpecMismatch,
    UnknownUnit,
)
from .tower import EXT_GENS, GROUND_GENS, Tower

DEFAULT_TOL = 1e-9
EIG_TOL = 1e-7


@dataclass(frozen=True)
class AntiInvolution:
    """Transpose-type anti-involution, recorded by its sign on each
    tower generator (aligned with ``tower.generators``)."""

    gen_signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (-1, 1) for s in self.gen_signs):
            raise ValueError("generator signs must be +1 or -1")


@dataclass(frozen=True)
class AlgebraSpec:
    n: int
    tower: Tower
    sigma: AntiInvolution

    def __post_init__(self):
        if len(self.sigma.gen_signs) != len(self.tower.generators):
            raise ValueError("sigma signs do not match tower generators")

    @property
    def dim(self) -> int:
        return self.tower.dim


# ----------------------------------------------------------------------
# spec constructors

_BASE_SIGNS = {
    # sign per ground generator
    ("R", "transpose"): (),
    ("C", "transpose"): (1,),
    ("C", "conj-transpose"): (-1,),
    ("H", "quat0"): (1, 1),
    ("H", "quat1"): (-1, -1),
}


def make_spec(
    n: int,
    ground: str = "R",
    base: str = "transpose",
    ext: str = "none",
    ext_signs: tuple[int, ...] | None = None,
    central: bool = False,
    central_sign: int = 1,
) -> AlgebraSpec:
    """Build a spec from named pieces.

    ``base`` is the anti-involution on the ground algebra ("transpose",
    "conj-transpose", "quat0", "quat1"); ``ext_signs`` gives the sign of
    the involution on each extension generator (defaults to all +1, the
    linear extension).
    """
    if (ground, base) not in _BASE_SIGNS:
        raise ValueError(f"base involution {base!r} undefined on ground {ground!r}")
    tower = Tower(ground=ground, ext=ext, central=central)
    if ext_signs is None:
        ext_signs = tuple(1 for _ in EXT_GENS[ext])
    if len(ext_signs) != len(EXT_GENS[ext]):
        raise ValueError("wrong number of extension signs")
    signs = _BASE_SIGNS[(ground, base)] + tuple(ext_signs)
    if central:
        signs = signs + (central_sign,)
    return AlgebraSpec(n=n, tower=tower, sigma=AntiInvolution(signs))


def extend(spec: AlgebraSpec, ext: str, ext_signs: tuple[int, ...] | None = None) -> AlgebraSpec:
    """Extend a spec with ext "none" by central ("c") or quaternion ("h")
    units; the involution extends with the given generator signs
    (default: fixing every new unit)."""
    if spec.tower.ext != "none":
        raise ValueError("spec is already extended")
    if ext_signs is None:
        ext_signs = tuple(1 for _ in EXT_GENS[ext])
    tower = replace(spec.tower, ext=ext)
    ground_count = len(GROUND_GENS[spec.tower.ground])
    signs = spec.sigma.gen_signs[:ground_count] + tuple(ext_signs) + spec.sigma.gen_signs[ground_count:]
    return AlgebraSpec(n=spec.n, tower=tower, sigma=AntiInvolution(signs))


def add_central(spec: AlgebraSpec, sign: int = 1) -> AlgebraSpec:
    if spec.tower.central:
        raise ValueError("spec already has an extra central unit")
    tower = replace(spec.tower, central=True)
    return AlgebraSpec(n=spec.n, tower=tower, sigma=AntiInvolution(spec.sigma.gen_signs + (sign,)))


def drop_ext(spec: AlgebraSpec) -> AlgebraSpec:
    """The un-extended spec underlying an extended one."""
    tower = replace(spec.tower, ext="none")
    ground_count = len(GROUND_GENS[spec.tower.ground])
    ext_count = len(EXT_GENS[spec.tower.ext])
    signs = spec.sigma.gen_signs[:ground_count] + spec.sigma.gen_signs[ground_count + ext_count :]
    return AlgebraSpec(n=spec.n, tower=tower, sigma=AntiInvolution(signs))


def with_sigma(spec: AlgebraSpec, flips: dict[str, int]) -> AlgebraSpec:
    """Copy of `spec` whose involution sign on the named generators is
    replaced (e.g. ``with_sigma(s, {"i": -1})`` for the conjugate-linear
    extension)."""
    gens = spec.tower.generators
    signs = list(spec.sigma.gen_signs)
    for name, sgn in flips.items():
        if name not in gens:
            raise UnknownUnit(f"generator {name!r} not in tower")
        signs[gens.index(name)] = sgn
    return AlgebraSpec(n=spec.n, tower=spec.tower, sigma=AntiInvolution(tuple(signs)))


# ----------------------------------------------------------------------
# elements


class AlgebraElement:
    """A (rows x cols) matrix over the tower, stored as real coefficients
    of shape (rows, cols, d)."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: AlgebraSpec, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim != 3 or coeffs.shape[2] != spec.dim:
            raise ShapeMismatch(f"expected (rows, cols, {spec.dim}), got {coeffs.shape}")
        self.spec = spec
        self.coeffs = coeffs

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[:2]

    def copy(self) -> "AlgebraElement":
        return AlgebraElement(self.spec, self.coeffs.copy())

    # -- arithmetic sugar ------------------------------------------------

    def _check(self, other: "AlgebraElement"):
        if self.spec != other.spec:
            raise SpecMismatch("operands live over different specs")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.spec, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.spec, self.coeffs - other.coeffs)

    def __neg__(self):
        return AlgebraElement(self.spec, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return AlgebraElement(self.spec, self.coeffs * float(other))

    def __rmul__(self, other):
        return AlgebraElement(self.spec, self.coeffs * float(other))

    def __truediv__(self, other):
        return AlgebraElement(self.spec, self.coeffs / float(other))

    def sigma(self) -> "AlgebraElement":
        return apply_sigma(self)

    def inv(self) -> "AlgebraElement":
        return inv(self)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __repr__(self):
        r, c = self.shape
        return f"<AlgebraElement {r}x{c} over {self.spec.tower}>"


# -- constructors --------------------------------------------------------


def zeros(spec: AlgebraSpec, rows: int | None = None, cols: int | None = None) -> AlgebraElement:
    rows = spec.n if rows is None else rows
    cols = rows if cols is None else cols
    return AlgebraElement(spec, np.zeros((rows, cols, spec.dim)))


def eye(spec: AlgebraSpec, size: int | None = None) -> AlgebraElement:
    size = spec.n if size is None else size
    c = np.zeros((size, size, spec.dim))
    c[np.arange(size), np.arange(size), 0] = 1.0
    return AlgebraElement(spec, c)


def scalar_unit(spec: AlgebraSpec, unit: str, size: int | None = None) -> AlgebraElement:
    """unit * identity, e.g. ``scalar_unit(spec, "i")``."""
    size = spec.n if size is None else size
    p = spec.tower.unit_index(unit)
    c = np.zeros((size, size, spec.dim))
    c[np.arange(size), np.arange(size), p] = 1.0
    return AlgebraElement(spec, c)


def from_real(spec: AlgebraSpec, mat: np.ndarray) -> AlgebraElement:
    mat = np.asarray(mat, dtype=float)
    c = np.zeros(mat.shape + (spec.dim,))
    c[:, :, 0] = mat
    return AlgebraElement(spec, c)


# ----------------------------------------------------------------------
# multiplication


@lru_cache(maxsize=None)
def _structure_tensor(tower: Tower) -> np.ndarray:
    idx, sign = tower.tables
    d = tower.dim
    s = np.zeros((d, d, d))
    rows = np.repeat(np.arange(d), d)
    cols = np.tile(np.arange(d), d)
    s[rows, cols, idx.reshape(-1)] = sign.reshape(-1)
    s.flags.writeable = False
    return s


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.spec.tower != b.spec.tower:
        raise SpecMismatch("operands live over different towers")
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    s = _structure_tensor(a.spec.tower)
    # two-step contraction: bs[k,j,p,r] = sum_q b[k,j,q] s[p,q,r], then
    # out[i,j,r] = sum_{k,p} a[i,k,p] bs[k,j,p,r]
    bs = np.tensordot(b.coeffs, s, axes=([2], [1]))
    out = np.tensordot(a.coeffs, bs, axes=([1, 2], [0, 2]))
    return AlgebraElement(a.spec, out)


def unit_mul(a: AlgebraElement, unit: str, side: str = "right") -> AlgebraElement:
    """Multiply by a scalar unit on the given side."""
    p = a.spec.tower.unit_index(unit)
    idx, sign = a.spec.tower.tables
    d = a.spec.dim
    out = np.zeros_like(a.coeffs)
    for q in range(d):
        if side == "right":
            out[:, :, idx[q, p]] += sign[q, p] * a.coeffs[:, :, q]
        else:
            out[:, :, idx[p, q]] += sign[p, q] * a.coeffs[:, :, q]
    return AlgebraElement(a.spec, out)


# ----------------------------------------------------------------------
# involutions and parts


@lru_cache(maxsize=None)
def _sigma_signs(spec: AlgebraSpec) -> np.ndarray:
    return spec.tower.sigma_signs(spec.sigma.gen_signs)


def apply_sigma(a: AlgebraElement) -> AlgebraElement:
    out = np.transpose(a.coeffs, (1, 0, 2)) * _sigma_signs(a.spec)
    return AlgebraElement(a.spec, out)


def symmetry_part(a: AlgebraElement, sign: int = 1) -> AlgebraElement:
    """(a + sign * sigma(a)) / 2."""
    return (a + float(sign) * apply_sigma(a)) * 0.5


def apply_theta(a: AlgebraElement, unit: str) -> AlgebraElement:
    """Conjugation with respect to one generator unit: negate every basis
    unit containing that generator."""
    gens = a.spec.tower.generators
    if unit not in gens:
        raise UnknownUnit(f"generator {unit!r} not in tower")
    bit = gens.index(unit)
    signs = np.where((np.arange(a.spec.dim) >> bit) & 1, -1.0, 1.0)
    return AlgebraElement(a.spec, a.coeffs * signs)


def reduced_trace(a: AlgebraElement) -> float:
    """Coefficient of the unit 1 of the matrix trace."""
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch("reduced trace needs a square element")
    return float(np.trace(a.coeffs[:, :, 0]))


# -- lifting / splitting -------------------------------------------------


@lru_cache(maxsize=None)
def _lift_map(small: Tower, big: Tower) -> np.ndarray:
    """Index of each small basis unit inside the big tower's basis."""
    small_names = small.unit_names()
    return np.array([big.unit_index(name) for name in small_names], dtype=np.intp)


def lift(a: AlgebraElement, big_spec: AlgebraSpec) -> AlgebraElement:
    """Reinterpret `a` in a larger tower containing all its units."""
    idx = _lift_map(a.spec.tower, big_spec.tower)
    r, c = a.shape
    out = np.zeros((r, c, big_spec.dim))
    out[:, :, idx] = a.coeffs
    return AlgebraElement(big_spec, out)


def _split_info(spec: AlgebraSpec, unit: str) -> tuple[AlgebraSpec, int]:
    tower = spec.tower
    gens = tower.generators
    if unit == "E" and tower.central:
        sub = replace(tower, central=False)
    elif unit == "i" and tower.ext == "c":
        sub = replace(tower, ext="none")
    elif unit == "j" and tower.ext == "h":
        sub = replace(tower, ext="c")
    else:
        raise UnknownUnit(f"cannot split tower {tower} along {unit!r}")
    bit = gens.index(unit)
    ground_count = len(GROUND_GENS[tower.ground])
    signs = tuple(s for k, s in enumerate(spec.sigma.gen_signs) if k != bit)
    sub_spec = AlgebraSpec(n=spec.n, tower=sub, sigma=AntiInvolution(signs))
    return sub_spec, bit


def split(a: AlgebraElement, unit: str) -> tuple[AlgebraElement, AlgebraElement]:
    """Write a = p + q * unit with p, q over the tower without `unit`.

    Valid for the top extension generator ("j" of a quaternionic
    extension, "i" of a central extension, or the extra central "E"),
    for which the decomposition is sign-free.
    """
    sub_spec, bit = _split_info(a.spec, unit)
    d_sub = sub_spec.dim
    sub_idx = _lift_map(sub_spec.tower, a.spec.tower)
    r, c = a.shape
    p = a.coeffs[:, :, sub_idx]
    q = a.coeffs[:, :, sub_idx | (1 << bit)]
    return AlgebraElement(sub_spec, p.copy()), AlgebraElement(sub_spec, q.copy())


def join(p: AlgebraElement, q: AlgebraElement, unit: str, big_spec: AlgebraSpec) -> AlgebraElement:
    """Inverse of :func:`split`: p + q * unit over `big_spec`."""
    sub_spec, bit = _split_info(big_spec, unit)
    if p.spec.tower != sub_spec.tower or q.spec.tower != sub_spec.tower:
        raise SpecMismatch("parts do not match the sub-tower")
    sub_idx = _lift_map(sub_spec.tower, big_spec.tower)
    r, c = p.shape
    out = np.zeros((r, c, big_spec.dim))
    out[:, :, sub_idx] = p.coeffs
    out[:, :, sub_idx | (1 << bit)] = q.coeffs
    return AlgebraElement(big_spec, out)


def restrict(a: AlgebraElement, sub_spec: AlgebraSpec, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Project onto the units of a sub-tower, checking nothing is lost."""
    idx = _lift_map(sub_spec.tower, a.spec.tower)
    out = a.coeffs[:, :, idx].copy()
    rest = a.coeffs.copy()
    rest[:, :, idx] = 0.0
    if np.linalg.norm(rest) > tol * max(1.0, np.linalg.norm(a.coeffs)):
        raise ShapeMismatch("element does not lie in the sub-tower")
    return AlgebraElement(sub_spec, out)


# ----------------------------------------------------------------------
# inversion via the left regular representation


def _left_operator(a: AlgebraElement) -> np.ndarray:
    """Matrix of b -> a*b acting on coefficient columns reshaped to
    (rows*d, cols)."""
    s = _structure_tensor(a.spec.tower)
    t = np.einsum("ikp,pqr->irkq", a.coeffs, s, optimize=True)
    m, k = a.shape[0], a.shape[1]
    d = a.spec.dim
    return t.reshape(m * d, k * d)


def _colstack(a: AlgebraElement) -> np.ndarray:
    # (rows, cols, d) -> (rows*d, cols); inverse of _colunstack
    return np.transpose(a.coeffs, (0, 2, 1)).reshape(a.shape[0] * a.spec.dim, a.shape[1])


def _colunstack(spec: AlgebraSpec, m: np.ndarray, rows: int) -> AlgebraElement:
    d = spec.dim
    c = m.reshape(rows, d, -1).transpose(0, 2, 1)
    return AlgebraElement(spec, c.copy())


def solve_left(a: AlgebraElement, b: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Solve a * x = b as a real linear system."""
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch("solve needs a square left factor")
    op = _left_operator(a)
    rhs = _colstack(b)
    x, *_ = np.linalg.lstsq(op, rhs, rcond=None)
    res = np.linalg.norm(op @ x - rhs)
    if res > max(tol, 1e3 * tol * np.linalg.norm(rhs)):
        raise Singular("left solve failed: residual %.3e" % res)
    return _colunstack(a.spec, x, a.shape[1])


def inv(a: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch("inverse needs a square element")
    op = _left_operator(a)
    if np.linalg.cond(op) > 1.0 / max(tol, np.finfo(float).eps):
        raise Singular("element is singular to working precision")
    rhs = _colstack(eye(a.spec, a.shape[0]))
    x = np.linalg.solve(op, rhs)
    out = _colunstack(a.spec, x, a.shape[0])
    resid = mul(a, out) - eye(a.spec, a.shape[0])
    if resid.norm() > 1e3 * tol * max(1.0, a.norm()):
        raise Singular("inverse verification failed")
    return out


def is_invertible(a: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    if a.shape[0] != a.shape[1]:
        return False
    op = _left_operator(a)
    return bool(np.linalg.cond(op) < 1.0 / max(tol, np.finfo(float).eps))


# ----------------------------------------------------------------------
# complex *-embedding

_PAULI = {
    "1": np.eye(2, dtype=complex),
    "u1": np.array([[1j, 0], [0, -1j]]),
    "u2": np.array([[0, 1], [-1, 0]], dtype=complex),
}


@lru_cache(maxsize=None)
def _unit_images(tower: Tower) -> tuple[np.ndarray, ...]:
    """Complex matrix image of each basis unit of the tower.

    Quaternion triples go to 2x2 blocks, the first central unit to the
    complex scalar i, and each further central unit splits the embedding
    into a pair of blocks on which it acts as +i and -i.
    """
    gens = tower.generators
    quats: list[tuple[int, int]] = []
    centrals: list[int] = []
    if tower.ground == "H":
        quats.append((gens.index("I"), gens.index("J")))
    elif tower.ground == "C":
        centrals.append(gens.index("I"))
    if tower.ext == "h":
        quats.append((gens.index("i"), gens.index("j")))
    elif tower.ext == "c":
        centrals.append(gens.index("i"))
    if tower.central:
        centrals.append(gens.index("E"))

    n_split = max(0, len(centrals) - 1)
    patterns = [()]
    for _ in range(n_split):
        patterns = [p + (s,) for p in patterns for s in (1, -1)]
    blk = 1 << len(quats)

    def gen_image(bit: int, pattern: tuple[int, ...]) -> np.ndarray:
        if bit in centrals:
            pos = centrals.index(bit)
            phase = 1j if pos == 0 else pattern[pos - 1] * 1j
            return phase * np.eye(blk)
        for qi, (b1, b2) in enumerate(quats):
            if bit in (b1, b2):
                factor = _PAULI["u1"] if bit == b1 else _PAULI["u2"]
                mats = [factor if k == qi else _PAULI["1"] for k in range(len(quats))]
                out = mats[0]
                for m in mats[1:]:
                    out = np.kron(out, m)
                return out
        raise AssertionError("unreachable")

    images = []
    for mask in range(tower.dim):
        blocks = []
        for pattern in patterns:
            img = np.eye(blk, dtype=complex)
            for bit in range(len(gens)):
                if mask >> bit & 1:
                    img = img @ gen_image(bit, pattern)
            blocks.append(img)
        if len(blocks) == 1:
            images.append(blocks[0])
        else:
            total = blk * len(blocks)
            full = np.zeros((total, total), dtype=complex)
            for k, b in enumerate(blocks):
                full[k * blk : (k + 1) * blk, k * blk : (k + 1) * blk] = b
            images.append(full)
    for img in images:
        img.flags.writeable = False
    return tuple(images)


def embed_dim(tower: Tower) -> int:
    return _unit_images(tower)[0].shape[0]


def embed_complex(a: AlgebraElement) -> np.ndarray:
    """Faithful complex matrix image of the element."""
    images = _unit_images(a.spec.tower)
    out = np.zeros((a.shape[0] * images[0].shape[0], a.shape[1] * images[0].shape[0]), dtype=complex)
    for p, img in enumerate(images):
        block = a.coeffs[:, :, p]
        if np.any(block):
            out += np.kron(block, img)
    return out


@lru_cache(maxsize=None)
def _unembed_pinv(tower: Tower) -> np.ndarray:
    """Pseudo-inverse recovering scalar coefficients from a unit image."""
    images = _unit_images(tower)
    m = images[0].shape[0]
    cols = [np.concatenate([img.real.reshape(-1), img.imag.reshape(-1)]) for img in images]
    basis = np.stack(cols, axis=1)  # (2 m^2, d)
    return np.linalg.pinv(basis)


def unembed(spec: AlgebraSpec, mat: np.ndarray, tol: float = 1e-8) -> AlgebraElement:
    """Inverse of :func:`embed_complex` on its image."""
    m = embed_dim(spec.tower)
    rows, cols = mat.shape[0] // m, mat.shape[1] // m
    pinv = _unembed_pinv(spec.tower)
    out = np.zeros((rows, cols, spec.dim))
    scale = max(1.0, np.linalg.norm(mat))
    for r in range(rows):
        for c in range(cols):
            blk = mat[r * m : (r + 1) * m, c * m : (c + 1) * m]
            v = np.concatenate([blk.real.reshape(-1), blk.imag.reshape(-1)])
            coeff = pinv @ v
            images = _unit_images(spec.tower)
            recon = sum(coeff[p] * images[p] for p in range(spec.dim))
            if np.linalg.norm(recon - blk) > tol * scale:
                raise ShapeMismatch("matrix is not in the image of the embedding")
            out[r, c] = coeff
    return AlgebraElement(spec, out)


@lru_cache(maxsize=None)
def is_hermitian_pair(spec: AlgebraSpec) -> bool:
    """True when the involution acts as conjugate transpose under the
    complex embedding (checked on deterministic samples and cached)."""
    rng = np.random.default_rng(20240711)
    for _ in range(4):
        a = AlgebraElement(spec, rng.standard_normal((spec.n, spec.n, spec.dim)))
        lhs = embed_complex(apply_sigma(a))
        rhs = embed_complex(a).conj().T
        if np.linalg.norm(lhs - rhs) > 1e-10 * max(1.0, np.linalg.norm(rhs)):
            return False
    return True


class Sign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NONNEGATIVE = "nonnegative"
    NONPOSITIVE = "nonpositive"
    INDEFINITE = "indefinite"
    NEITHER = "neither"


def is_positive(a: AlgebraElement, tol: float = DEFAULT_TOL, eig_tol: float = EIG_TOL) -> Sign:
    """Sign classification of a sigma-fixed element of a Hermitian pair."""
    if not is_hermitian_pair(a.spec):
        raise NotHermitianPair("positivity undefined: involution is not a *-involution here")
    if (a - apply_sigma(a)).norm() > tol * max(1.0, a.norm()):
        return Sign.NEITHER
    mat = embed_complex(a)
    mat = (mat + mat.conj().T) / 2.0
    w = np.linalg.eigvalsh(mat)
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    lo, hi = float(np.min(w)), float(np.max(w))
    cut = eig_tol * scale
    if lo > cut:
        return Sign.POSITIVE
    if hi < -cut:
        return Sign.NEGATIVE
    if lo > -cut and hi > cut:
        return Sign.NONNEGATIVE
    if hi < cut and lo < -cut:
        return Sign.NONPOSITIVE
    return Sign.INDEFINITE


def sqrt_positive(a: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Principal square root of a positive sigma-fixed element."""
    if is_positive(a, tol=tol) is not Sign.POSITIVE:
        raise NotPositive("square root requested for a non-positive element")
    mat = embed_complex(a)
    mat = (mat + mat.conj().T) / 2.0
    w, v = np.linalg.eigh(mat)
    root = (v * np.sqrt(w)) @ v.conj().T
    out = unembed(a.spec, root)
    check = mul(out, out) - a
    if check.norm() > 1e4 * tol * max(1.0, a.norm()):
        raise NotPositive("square root verification failed")
    return out


# ----------------------------------------------------------------------
# sampling


def sample(
    spec: AlgebraSpec,
    constraint: str = "free",
    rng: np.random.Generator | int | None = None,
    rows: int | None = None,
    scale: float = 1.0,
) -> AlgebraElement:
    """Deterministic random element subject to a symmetry constraint.

    constraint: "free", "sym", "antisym", "positive", "invertible".
    """
    rng = np.random.default_rng(rng)
    rows = spec.n if rows is None else rows
    raw = AlgebraElement(spec, scale * rng.standard_normal((rows, rows, spec.dim)) / np.sqrt(spec.dim))
    if constraint == "free":
        return raw
    if constraint == "sym":
        return symmetry_part(raw, 1)
    if constraint == "antisym":
        return symmetry_part(raw, -1)
    if constraint == "invertible":
        g = raw
        for _ in range(8):
            # demand a well-conditioned sample so that products g*sigma(g)
            # stay safely positive definite downstream
            if is_invertible(g, tol=1e-3):
                return g
            g = g + eye(spec, rows) * 0.5
        raise Singular("failed to sample an invertible element")
    if constraint == "positive":
        g = sample(spec, "invertible", rng, rows=rows, scale=scale)
        return mul(g, apply_sigma(g))
    raise ValueError(f"unknown constraint {constraint!r}")
