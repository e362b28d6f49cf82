"""Hilbert series, regularity and Macaulay-matrix tools for quadratic systems over prime fields."""

from .errors import BudgetExceeded, IdentityViolation, OvalgError
from .ffield import FieldSpec, matrix_rank, row_reduce
from .invariants import (analyze, delta_relation, index_of_regularity, krull_dimension, mixed_decomposition,
                         ov_decomposition, ov_dreg, mixed_dreg, triv_count, tr_v2_check)
from .macaulay import (build_macaulay, empirical_hilbert, first_fall_degree, groebner_check, rank_at_degree,
                       solving_degree)
from .polyring import Polynomial, Ring
from .series import RationalGF, TruncatedSeries, bracket, expand
from .sysgen import PolySystem, gen_full, gen_mixed, gen_ov, is_ov, load_system, parse_system, save_system

__version__ = "0.1.0"
