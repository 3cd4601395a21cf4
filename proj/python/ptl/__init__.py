"""Python bindings for the ptl library."""

from ptl._core import (
    baik_rains_cdf,
    bessel_k,
    energy,
    grsk,
    grsk_exact,
    laplace_contour,
    laplace_mc,
    laplace_whittaker,
    log_gamma,
    lpp_cdf,
    run_cli,
    schur_pfaffian,
    schur_pfaffian_product,
    sp_cont,
    sp_poly,
    whittaker_gl,
    whittaker_so,
)

__all__ = [
    "baik_rains_cdf",
    "bessel_k",
    "energy",
    "grsk",
    "grsk_exact",
    "laplace_contour",
    "laplace_mc",
    "laplace_whittaker",
    "log_gamma",
    "lpp_cdf",
    "run_cli",
    "schur_pfaffian",
    "schur_pfaffian_product",
    "sp_cont",
    "sp_poly",
    "whittaker_gl",
    "whittaker_so",
]
