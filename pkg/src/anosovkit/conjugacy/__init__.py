"""Numerical conjugacy lab for perturbed Z^k toral Anosov actions.

Solve f ∘ h = h ∘ A for h = id + u on a grid (the integer matrix A maps
grid points to grid points, so the discrete system is the exact functional
equation restricted to an invariant finite set), verify that the one
conjugacy intertwines every generator, and probe its directional
regularity.
"""

from .perturbation import (
    ConjugatedPerturbation,
    ToralPerturbation,
    TrigPolynomial,
    psi_conjugation,
    shift_perturbation,
)
from .solver import (
    ConjugacyField,
    Diverged,
    NotAnosov,
    ResolutionInsufficient,
    solve_conjugacy,
)
from .probes import regularity_probe, verify_intertwining

__all__ = [
    "ConjugacyField",
    "ConjugatedPerturbation",
    "Diverged",
    "NotAnosov",
    "ResolutionInsufficient",
    "ToralPerturbation",
    "TrigPolynomial",
    "psi_conjugation",
    "regularity_probe",
    "shift_perturbation",
    "solve_conjugacy",
    "verify_intertwining",
]
