"""anosovkit: computable rigidity machinery for higher-rank abelian Anosov actions.

Subpackages and modules:

- ``spectra``: exact joint spectrum / Lyapunov functionals of commuting
  integer matrices, Anosov and weak-mixing criteria.
- ``chambers``: Lyapunov half-spaces, Weyl chambers, coarse Lyapunov
  decomposition, and the rank-two hypothesis checker.
- ``resonance``: narrow-band spectra and sub-resonance relation enumeration.
- ``normalform``: truncated polynomial map algebra, sub-resonance normal
  forms of contractions, centralizer verification.
- ``conjugacy``: numerical conjugacy solver for perturbed toral actions,
  intertwining verification, regularity probes.
- ``rootsys``: restricted root systems and Weyl-chamber-flow Lyapunov data.
- ``cli``: the ``anosovkit`` command line front end.
"""

__version__ = "0.1.0"
