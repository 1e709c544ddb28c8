"""Lax-Phillips scattering in the outgoing spectral representation.

Functions on the real line are stored as coefficients in the rational
orthonormal basis, where the Hardy projections are exact truncations.
"""

__version__ = "0.1.0"

from .errors import (
    AliasingError,
    DiscretizationError,
    DomainError,
    LaxPhillipsError,
    NonCommutingError,
    PoleError,
    TailBoundError,
    UnsupportedError,
)
from .hardy import (
    HardySign,
    MultiplicitySpace,
    SamplingGrid,
    SpectralFunction,
    analyze,
    cauchy_project_oracle,
    evaluate_line,
    evaluate_lower,
    evaluate_upper,
    from_callable,
    hardy_project,
    synthesize,
)
from .scattering import (
    BlaschkeFactor,
    Orientation,
    RationalPhase,
    ScatteringMatrix,
    adjoint_scattering,
    apply_scattering,
    eval_scattering,
    pole_set,
    scattering_from_record,
    symbol_coefficients,
)
from .semigroups import (
    ReproducingVector,
    characteristic_adjoint_apply,
    characteristic_apply,
    decay_profile,
    make_reproducing,
    reference_evolve,
)
from .lp_system import (
    LPSystem,
    check_commutation,
    check_isometry_equivalences,
    gram_defect,
    identification_adjoint_apply,
    identification_apply,
    projection_algebra,
)
from .lp_semigroup import (
    continuation_sufficiency_check,
    lp_semigroup_apply,
    pole_correspondence,
    resonance_projector,
    survival_test,
    verify_semigroup_property,
)
