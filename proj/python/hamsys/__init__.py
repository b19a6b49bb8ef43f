"""Spectral Galerkin solver for Dirichlet Hamiltonian elliptic systems.

Thin wrapper over the compiled core: classification of the exponent pair,
Dirichlet Laplacian eigenvalues on the model domains, ground-state levels via
the independent variational frameworks, and a full configured run returning
the manifest.
"""

try:
    from hamsys._core import classify, eigenvalues, ground_state_level, solve
except ImportError:  # development layout: the module sits next to the build tree
    from _core import classify, eigenvalues, ground_state_level, solve

__all__ = ["classify", "eigenvalues", "ground_state_level", "solve"]
