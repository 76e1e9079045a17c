"""Exact symbolic workbench for the (1+1) quantum extended Galilei algebra."""

from .freealg import (
    NCPolynomial,
    Presentation,
    TensorElement,
    commutator,
    convert_basis,
    freealg_report,
    limit_a0,
    multiply,
    normal_order,
    preset,
    verify_flow_lemma,
)
from .hopf import (
    HopfData,
    antipode,
    check_hopf_axioms,
    check_pairing_diagonal,
    coproduct,
    counit,
    hopf_data,
    hopf_pairing,
)
from .induction import (
    CarrierElement,
    Character,
    casimir_action,
    casimir_element,
    check_equivalence_alpha,
    check_equivariance,
    check_relations_on_module,
    check_star_consistency,
    classical_limit,
    induced_action,
    reduced_casimir_action,
    star,
)
from .lattice import LatticeParams, LatticeState, check_unitarity, dispersion, dispersion_study, evolve
from .opcalc import (
    LinearOperator,
    WaveFunction,
    act_triangleleft,
    act_triangleright,
    apply,
    check_duality,
    cosh_diff_over_a2_dmu,
    one_minus_cosh_over_a2,
    pairing_A,
    sinh_shift_over_a,
)
from .parse import ParseError, parse_element, parse_scalar, parse_wavefunction
from .report import CheckRecord, VerificationReport
from .scalar import A, ALPHA, BETA, I, GaussRational, Scalar

__version__ = "0.1.0"
