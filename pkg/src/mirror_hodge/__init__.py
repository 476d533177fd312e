"""Exact variant stringy E-polynomials of SL_r and PGL_r Higgs moduli spaces
(r prime) and the check that the two sides agree."""

from .algebra import BiPoly, CycBiPoly, CycElem, cyc_mul, exact_div, poly_mul, poly_pow, rou_filter
from .errors import (
    EnumerationCapError,
    IncompatibleRingError,
    InexactDivisionError,
    InvariantViolation,
    MirrorError,
    NonRationalError,
    OpenConjectureError,
    ParameterError,
)
from .pgl import (
    GammaFixedLocus,
    fermionic_shift,
    pgl_variant_closed,
    pgl_variant_raw,
    shift_from_weights,
    stringy_higher_terms,
)
from .report import MirrorReport, emit, mirror_check, stability_audit, sweep, torsion_audit
from .sl import (
    check_stability,
    coeff_cm,
    enumerate_mtuples,
    other_component_variant,
    reconstruct_degrees,
    sl_variant_enum,
    sl_variant_filter,
)
from .torsion import (
    TorsionElement,
    TorsionGroup,
    character_average,
    component_action_exponent,
    pairing_value_counts,
    prym_h1_eigenvalues,
    weil_pairing,
)

__version__ = "0.1.0"
