"""Numerics for symplectic and indefinite orthogonal groups over
involutive matrix algebras and the four models of their symmetric spaces."""

from . import algebra, errors, groups, hitchin, models, transforms
from .algebra import AlgebraElement, AlgebraSpec, make_spec
from .groups import Family, GroupId
from .hitchin import HiggsFamily, HiggsVector
from .models import Kind, ModelFamily, ModelId, ModelPoint, TangentVector

__all__ = [
    "algebra",
    "errors",
    "groups",
    "models",
    "transforms",
    "hitchin",
    "AlgebraElement",
    "AlgebraSpec",
    "make_spec",
    "Family",
    "GroupId",
    "HiggsFamily",
    "HiggsVector",
    "Kind",
    "ModelFamily",
    "ModelId",
    "ModelPoint",
    "TangentVector",
]

__version__ = "0.1.0"
