"""Certified verification toolkit for singular moduli.

Library layers:

  forms       exact discriminant / reduced-form combinatorics
  ball        certified midpoint-radius arithmetic (the numeric currency)
  modular     certified j, j', Eisenstein series, envelopes, elliptic constants
  singular    orbits of singular moduli and Hilbert class polynomials
  separation  separation bounds and their exhaustive desk-scale sweeps
  primel      the finite checks behind the x + alpha*y classification
  cli         `moduli-verify` with machine-readable reports
"""

from .ball import CertifiedComplex, CertifiedReal
from .errors import (
    DegenerateDenominator,
    DegenerateInput,
    DomainError,
    InvalidAlpha,
    ModuliError,
    NotADiscriminant,
    NotInClassifiedList,
    PrecisionExhausted,
    ReconstructionFailed,
)
from .forms import (
    Discriminant,
    QuadraticNumber,
    ReducedForm,
    class_number,
    dominance_census,
    reduced_forms,
    separate_quadratic,
    validate_discriminant,
)
from .modular import (
    envelope_f,
    envelope_g,
    eval_delta_form,
    eval_eisenstein,
    eval_j,
    eval_j_prime,
    j_coefficients,
    jprime_floor,
)
from .primel import classify_primitive, exceptional_alpha, exceptional_discriminants
from .separation import min_pairwise_distance, separation_bound, verify_cderiv, verify_separation_theorem
from .singular import dominant_modulus, hilbert_class_polynomial, orbit

__version__ = "0.1.0"
