"""Exact linear algebra over the ring tower."""

from .elementary import ElementaryOp, ElementaryWord, Transvection, WhiteheadBlock
from .factor import factor_det_one, normalize_by_determinants, reduce_to_alpha_block
from .matrix import Matrix, block_diag, det, det_by_permutations, direct_sum_identity
from .smith import (
    SnfResult,
    check_snf,
    divides,
    divisibility_chain_holds,
    euclid_divide,
    normalize,
    snf_fp,
)

__all__ = [
    "ElementaryOp", "ElementaryWord", "Transvection", "WhiteheadBlock", "factor_det_one",
    "normalize_by_determinants", "reduce_to_alpha_block", "Matrix", "block_diag", "det",
    "det_by_permutations", "direct_sum_identity", "SnfResult", "check_snf", "divides",
    "divisibility_chain_holds", "euclid_divide", "normalize", "snf_fp",
]
