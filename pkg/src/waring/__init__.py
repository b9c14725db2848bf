"""Waring's problem over finite fields, matrix rings and finite commutative rings."""

__version__ = "0.1.0"

from .decomposition import Decomposition, FieldAlgebra, MatrixAlgebra, verify_decomposition
from .errors import WaringError
from .field import build_field, extension_field, field_of_order, parse_element
from .gamma import (
    GammaResult,
    decompose_field,
    gamma,
    gamma_max,
    gamma_table,
    power_residues,
    represent,
    uncoverable_fields,
)
from .hensel import (
    TPoly,
    f_adic_valuation,
    hensel_strong,
    hensel_weak,
    lift_power_sum,
    radical_hensel,
    taylor_split,
)
from .matrix import decompose_matrix, factorize, minimal_polynomial, parse_matrix
from .poly import FqPoly
from .rings import (
    PolyQuotient,
    Product,
    TableRing,
    Zn,
    brute_force_waring,
    decompose_ring_element,
    decompose_via_zalpha,
    jacobson_radical,
    matrix_table_ring,
    parse_ring,
    unit_power_criterion,
    zalpha_subring,
)
from .scan import ScanJob, run_scan
from .spectral import (
    sarkozy_find_pair,
    sarkozy_min_size,
    sarkozy_threshold,
    spectrum,
    spectrum_bruteforce,
    verify_appendix_lemmas,
)

__all__ = [name for name in dir() if not name.startswith("_")]
