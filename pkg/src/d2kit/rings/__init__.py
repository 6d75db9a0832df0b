"""The exact ring tower: Z_n, Laurent rings R, R_n, R_p, Z[Gamma] and S."""

from .group import (
    GroupRing,
    GroupRingElem,
    QuotientRing,
    SElem,
    augment_eps,
    augment_x,
    divide_by_x_minus_1,
    eps_hat_S,
    to_rn,
)
from .laurent import (
    Laurent,
    LaurentRing,
    ModulusDecomp,
    UnitCert,
    crt_embed,
    crt_join,
    crt_split,
    factorize,
    invert_unit_rn,
    is_prime,
    is_unit_rn,
    unit_cert,
    units_mod,
)
from .text import format_terms, parse_terms

__all__ = [
    "GroupRing", "GroupRingElem", "QuotientRing", "SElem", "augment_eps", "augment_x",
    "divide_by_x_minus_1", "eps_hat_S", "to_rn", "Laurent", "LaurentRing", "ModulusDecomp",
    "UnitCert", "crt_embed", "crt_join", "crt_split", "factorize", "invert_unit_rn",
    "is_prime", "is_unit_rn", "unit_cert", "units_mod", "format_terms", "parse_terms",
]
