"""Exact Holant and #CSP evaluation and classification over Q(zeta_8)."""

from __future__ import annotations

from .classes import (
    ClassVerdict,
    classify_csp2c,
    classify_holant_c,
    holant_star_tractable,
    in_A,
    in_A_alpha,
    in_L,
    in_L_characterization,
    in_L_definition,
    in_M,
    in_P,
    two_term_decompose,
)
from .cyclo import ALPHA, I, ONE, SQRT2, ZERO, Cyc8, alpha_pow, format_cyc8, parse_cyc8
from .errors import HolantError
from .grid import SignatureGrid, compose_gadget, holant_brute, validate_grid
from .signatures import (
    Signature,
    affine_support_of,
    bundles_of,
    compressed_of,
    fit_alpha_form,
    tensor_factorize,
)
from .solvers import (
    solve_affine_grid,
    solve_auto,
    solve_local_affine_grid,
    solve_product_grid,
)

__version__ = "0.1.0"
