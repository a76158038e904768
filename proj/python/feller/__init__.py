"""Markov semigroup regularity checks with exact certificates.

Thin Python surface over the C++ core: property checkers for the e-property,
the asymptotic e-property, and the asymptotic strong Feller property, plus the
exact Wasserstein solver the checkers are built on.
"""

from ._core import (
    __version__,
    apply_scaling,
    blowup_threshold,
    blowup_value,
    check,
    demo_asf_without_e,
    demo_e_without_asf,
    refute_identity_asf,
    scaling_asf_bound,
    scaling_log_factor,
    wasserstein,
)

__all__ = [
    "__version__",
    "apply_scaling",
    "blowup_threshold",
    "blowup_value",
    "check",
    "demo_asf_without_e",
    "demo_e_without_asf",
    "refute_identity_asf",
    "scaling_asf_bound",
    "scaling_log_factor",
    "wasserstein",
]
