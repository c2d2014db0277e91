"""Explicit Neron-Tate height bounds and rational-point search for genus-2 curves.

Rational quantities are returned as :class:`fractions.Fraction`; points are
``(X, Y, Z)`` tuples of Python ints in weighted projective coordinates.
"""

from ._core import (
    Error,
    bilinear_form,
    cap_area_fraction,
    cap_cos_lower,
    classify_points,
    delta_sum_from_faltings,
    enumerate_points,
    faltings_upper_via_isogeny,
    gap_cos_bound,
    gap_defect,
    group_closure,
    integer_sqrt,
    m_constant,
    neron_tate_bound,
    phi_correction,
    phi_p,
    report,
    solve_exact,
    tau,
    validate_fibre,
    verify_automorphism,
    wilms_floor,
    x_height_bound,
    xi_solution,
)

__all__ = [
    "Error",
    "bilinear_form",
    "cap_area_fraction",
    "cap_cos_lower",
    "classify_points",
    "delta_sum_from_faltings",
    "enumerate_points",
    "faltings_upper_via_isogeny",
    "gap_cos_bound",
    "gap_defect",
    "group_closure",
    "integer_sqrt",
    "m_constant",
    "neron_tate_bound",
    "phi_correction",
    "phi_p",
    "report",
    "solve_exact",
    "tau",
    "validate_fibre",
    "verify_automorphism",
    "wilms_floor",
    "x_height_bound",
    "xi_solution",
]
