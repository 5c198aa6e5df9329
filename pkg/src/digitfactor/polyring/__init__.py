"""Polynomial arithmetic over Z_N with subquadratic multiplication."""

from .core import (
    NEG_INF,
    ModPoly,
    eval_horner,
    poly_divrem,
    poly_mul,
    series_inverse,
)
from .counter import DEFAULT_CUTOFF, OpCounter, get_cutoff, mul_cutoff, schoolbook_only
from .trees import ProductTree, SubproductTree, multipoint_eval, product_tree

__all__ = [
    "NEG_INF",
    "ModPoly",
    "eval_horner",
    "poly_divrem",
    "poly_mul",
    "series_inverse",
    "DEFAULT_CUTOFF",
    "OpCounter",
    "get_cutoff",
    "mul_cutoff",
    "schoolbook_only",
    "ProductTree",
    "SubproductTree",
    "multipoint_eval",
    "product_tree",
]
