"""Scalar towers: finite real algebras spanned by products of imaginary units.

A tower is determined by three choices:

* ``ground``: the scalar field of the base matrix algebra, one of
  ``"R"``, ``"C"`` (one internal unit ``I``) or ``"H"`` (internal units
  ``I, J, K = I*J``);
* ``ext``: an optional extension of the base algebra, one of ``"none"``,
  ``"c"`` (a central unit ``i``) or ``"h"`` (quaternion units ``i, j,
  k = i*j`` commuting with the ground units);
* ``central``: whether one extra central unit ``E`` (squaring to -1 and
  commuting with everything) is adjoined.

Elements of the tower are real linear combinations of the basis units,
which are the products of distinct generators in the canonical order
``I, J, i, j, E``.  Generators belonging to the same quaternion triple
anticommute; all other pairs commute; every generator squares to -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnknownUnit

GROUND_GENS = {"R": (), "C": ("I",), "H": ("I", "J")}
EXT_GENS = {"none": (), "c": ("i",), "h": ("i", "j")}

# group id per generator: generators in the same non-central group anticommute
_GEN_GROUP = {"I": "ground", "J": "ground", "i": "ext", "j": "ext", "E": None}

# composite unit names (products of two generators of a quaternion triple)
_COMPOSITES = {"K": ("I", "J"), "k": ("i", "j")}


@dataclass(frozen=True)
class Tower:
    """Immutable description of a scalar tower."""

    ground: str = "R"
    ext: str = "none"
    central: bool = False

    def __post_init__(self):
        if self.ground not in GROUND_GENS:
            raise ValueError(f"unknown ground {self.ground!r}")
        if self.ext not in EXT_GENS:
            raise ValueError(f"unknown extension {self.ext!r}")

    @property
    def generators(self) -> tuple[str, ...]:
        gens = GROUND_GENS[self.ground] + EXT_GENS[self.ext]
        if self.central:
            gens = gens + ("E",)
        return gens

    @property
    def dim(self) -> int:
        return 1 << len(self.generators)

    # ------------------------------------------------------------------
    # basis bookkeeping

    def unit_gens(self, mask: int) -> tuple[str, ...]:
        """Generators (in canonical order) whose product is basis unit `mask`."""
        gens = self.generators
        return tuple(g for b, g in enumerate(gens) if mask >> b & 1)

    def unit_name(self, mask: int) -> str:
        if mask == 0:
            return "1"
        return "".join(self.unit_gens(mask))

    def unit_names(self) -> tuple[str, ...]:
        return tuple(self.unit_name(m) for m in range(self.dim))

    def unit_index(self, name: str) -> int:
        """Basis index of a named unit ("1", a generator, "K", "k", or a
        product such as "Ii")."""
        if name == "1":
            return 0
        gens = self.generators
        mask = 0
        pos = 0
        while pos < len(name):
            ch = name[pos]
            if ch in _COMPOSITES:
                parts = _COMPOSITES[ch]
            else:
                parts = (ch,)
            for g in parts:
                if g not in gens:
                    raise UnknownUnit(f"unit {name!r} not in tower {self}")
                mask |= 1 << gens.index(g)
            pos += 1
        return mask

    # ------------------------------------------------------------------
    # structure constants

    @property
    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(idx, sign) with u_p * u_q = sign[p, q] * u_{idx[p, q]}."""
        return _tables(self)

    def sigma_signs(self, gen_signs: tuple[int, ...]) -> np.ndarray:
        """Signs of a transpose-type anti-involution on the basis units.

        ``gen_signs[b]`` is the sign the involution puts on generator ``b``.
        On a product of generators the involution reverses the order, so the
        resulting sign on a basis unit also picks up the commutation factors.
        """
        idx, sign = self.tables
        gens = self.generators
        out = np.ones(self.dim)
        for mask in range(self.dim):
            cur_idx, cur_sign = 0, 1.0
            for b in reversed(range(len(gens))):
                if mask >> b & 1:
                    g = 1 << b
                    cur_sign *= gen_signs[b] * sign[cur_idx, g]
                    cur_idx = idx[cur_idx, g]
            assert cur_idx == mask
            out[mask] = cur_sign
        return out


def _anticommute(g1: str, g2: str) -> bool:
    grp = _GEN_GROUP[g1]
    return grp is not None and grp == _GEN_GROUP[g2] and g1 != g2


@lru_cache(maxsize=None)
def _tables(tower: Tower) -> tuple[np.ndarray, np.ndarray]:
    gens = tower.generators
    d = tower.dim
    idx = np.zeros((d, d), dtype=np.intp)
    sign = np.zeros((d, d))
    for p in range(d):
        for q in range(d):
            word = list(tower.unit_gens(p)) + list(tower.unit_gens(q))
            s = 1.0
            # bubble into canonical order, tracking anticommutations
            changed = True
            while changed:
                changed = False
                for a in range(len(word) - 1):
                    g1, g2 = word[a], word[a + 1]
                    if g1 == g2:
                        # every generator squares to -1
                        del word[a : a + 2]
                        s = -s
                        changed = True
                        break
                    if gens.index(g1) > gens.index(g2):
                        word[a], word[a + 1] = g2, g1
                        if _anticommute(g1, g2):
                            s = -s
                        changed = True
                        break
            mask = 0
            for g in word:
                mask |= 1 << gens.index(g)
            idx[p, q] = mask
            sign[p, q] = s
    idx.flags.writeable = False
    sign.flags.writeable = False
    return idx, sign
