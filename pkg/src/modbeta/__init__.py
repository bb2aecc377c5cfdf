"""Exact q-expansion arithmetic for the alpha and beta families at a prime p >= 5."""

from .chromatic import (
    BetaCertificate,
    MRWIndex,
    alpha_group,
    alpha_infinity,
    beta_group,
    beta_search,
    certificate_from_json,
    certificate_to_json,
    check_conditions,
    converse_check,
    mrw_admissible,
    mrw_enumerate,
    new_generator_count,
    rigidity_check,
    verify_certificate,
)
from .level1 import ModularForm, basis, basis_mod, delta, e_form, eisenstein
from .level_ell import build_space, dimension, membership_mod
from .numtheory import PrimeContext, bernoulli, nu_p
from .qseries import QQ, ZZ, QExpansion, Zmod

__all__ = [
    "BetaCertificate",
    "MRWIndex",
    "ModularForm",
    "PrimeContext",
    "QExpansion",
    "QQ",
    "ZZ",
    "Zmod",
    "alpha_group",
    "alpha_infinity",
    "basis",
    "basis_mod",
    "bernoulli",
    "beta_group",
    "beta_search",
    "build_space",
    "certificate_from_json",
    "certificate_to_json",
    "check_conditions",
    "converse_check",
    "delta",
    "dimension",
    "e_form",
    "eisenstein",
    "membership_mod",
    "mrw_admissible",
    "mrw_enumerate",
    "new_generator_count",
    "nu_p",
    "rigidity_check",
    "verify_certificate",
]
