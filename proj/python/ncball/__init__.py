"""Joint spectral radii of matrix tuples, similarity to operator balls and
noncommutative rational functions."""

from ._core import (  # noqa: F401
    NcballError,
    OutsideDomainError,
    Realization,
    Space,
    ball_contains,
    decide_similarity_to_ball,
    domain_ball_certificate,
    domain_contains,
    domain_sigma_min,
    eval_expr,
    eval_realization,
    famous_realization,
    famous_scalar_value,
    holder_jordan,
    is_irreducible,
    lemma_T_check,
    minimize_conjugated_norm,
    minimize_realization,
    parse_expr,
    realize,
    rho_column_exact,
    rho_estimate,
    rho_row_exact,
    rho_rs_bounds,
    space_norm,
    word_power_check,
    word_sum_norm,
)

__version__ = "0.1.0"
