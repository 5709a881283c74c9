"""Exact signature invariants of algebraic links, sweep inequalities, and a
numeric curve-sphere tracer."""

from .spectra import (
    CableChain,
    SignatureProfile,
    cable_signature_tl,
    closed_form_small,
    signature_profile_torus,
    torus_signature,
    torus_signature_tl,
    torus_spectrum,
)
from .seifert import (
    BraidWord,
    IllConditionedForm,
    InertiaResult,
    SeifertMatrix,
    inertia,
    seifert_from_positive_braid,
    signature_nullity_star,
    tl_form,
    torus_braid,
)
from .links import (
    Cable,
    ConnectedSum,
    DisconnectedSum,
    Given,
    PuiseuxData,
    SingularityData,
    TorusLink,
    Verdict,
    cable_chain_from_puiseux,
    descriptor_invariants,
)
from .morse import (
    MorseScenario,
    check_betti,
    check_mthm2,
    check_tlbetti,
    cormain_bound,
    cusp_bound_check,
    cusp_max,
    w_u,
)

__version__ = "0.1.0"
