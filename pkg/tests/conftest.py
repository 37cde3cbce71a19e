import numpy as np
import pytest

from symspaces import algebra as al
from symspaces import models as md


@pytest.fixture
def spec2():
    return al.make_spec(2)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


MODEL_FAMS = [
    md.ModelFamily.O11,
    md.ModelFamily.AX,
    md.ModelFamily.OC,
    md.ModelFamily.SP2,
    md.ModelFamily.SP2C,
]

KINDS = [md.Kind.C, md.Kind.P, md.Kind.U, md.Kind.B]


def mid2(fam, kind, sign=1):
    s = sign if kind in md._SIGNED_KINDS else 1
    return md.ModelId(fam, kind, al.make_spec(2), s)
