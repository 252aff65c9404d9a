"""Classification of linear codes over GF(2), GF(3), GF(4) up to equivalence."""

from .gf import FieldSpec, field_make
from .code import LinearCode, code_from_rows, dual, from_strings
from .symmetry import SemimonomialMap, map_apply, map_apply_code, map_compose, map_invert
from .canon import canonicalize, special_orbit

__all__ = [
    "FieldSpec", "field_make", "LinearCode", "code_from_rows", "dual", "from_strings",
    "SemimonomialMap", "map_apply", "map_apply_code", "map_compose", "map_invert",
    "canonicalize", "special_orbit",
]
