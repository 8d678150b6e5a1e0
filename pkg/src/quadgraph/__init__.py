"""Leaves of functional graphs generated by several maps X^2 + a over F_p."""

from .field import PrimeField, build_field, chi, is_prime
from .leaves import (
    ShiftFamily,
    bound_count_n,
    count_leaves_bitset,
    count_leaves_scan,
    leaf_count_closed1,
    leaf_count_closed2,
)
from .curves import delta, frobenius_angle, frobenius_trace, leaf_count_closed3
from .census import aggregate, census_brute, census_reduced, min_max_leaves, proportions
from .cover import best_cover_shift, greedy_leafless, leaf_guarantee_threshold, verify_leafless
from .dist import rho_empirical, rho_theoretical, sato_tate_mass, sup_cdf_deviation

__version__ = "0.1.0"
