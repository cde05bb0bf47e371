"""Sturm-Liouville Dirichlet eigenvalue solver.

Two routes to the spectrum of u'' - q u = lam*u with u(0) = u(1) = 0
(after interval normalization):

* the transmutation-operator method: push the Chebyshev-Bessel
  expansion of sin(beta*x) through the operator that maps x^k to the
  recursively built functions phi_k, and find zeros of the result at
  x = 1;
* the spectral parameter power series: zeros of S(lam) = u2(1; lam).

A finite-difference oracle with Richardson extrapolation provides an
independent cross-check, and a CLI exposes all three.
"""

from .grid import (
    DivisionByNearZeroError,
    GridMismatchError,
    SampledFunction,
    UniformGrid,
    cumulative_integral,
    pointwise,
)
from .spps import (
    ConvergenceError,
    PhiBasis,
    Potential,
    SeriesTruncationError,
    SppsSolution,
    VanishingSolutionError,
    build_particular_solution,
    build_phi_basis,
    spps_characteristic,
    spps_solution,
)
from .bessel import bessel_j, bessel_j_sequence
from .transmute import (
    ChebyshevTable,
    TransmutationChar,
    TransmutedImages,
    chebyshev_table,
    phi_char,
    transmute_cos,
    transmute_sin,
    transmuted_images,
)
from .solver import (
    EigenRecord,
    NormalizedProblem,
    ProblemSpec,
    Spectrum,
    fd_oracle,
    find_eigenvalues_spps,
    find_eigenvalues_transmutation,
    normalize,
    oracle_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "UniformGrid",
    "SampledFunction",
    "cumulative_integral",
    "pointwise",
    "GridMismatchError",
    "DivisionByNearZeroError",
    "Potential",
    "PhiBasis",
    "SppsSolution",
    "build_particular_solution",
    "build_phi_basis",
    "spps_solution",
    "spps_characteristic",
    "ConvergenceError",
    "VanishingSolutionError",
    "SeriesTruncationError",
    "bessel_j",
    "bessel_j_sequence",
    "ChebyshevTable",
    "chebyshev_table",
    "TransmutedImages",
    "transmuted_images",
    "TransmutationChar",
    "phi_char",
    "transmute_sin",
    "transmute_cos",
    "ProblemSpec",
    "NormalizedProblem",
    "EigenRecord",
    "Spectrum",
    "normalize",
    "find_eigenvalues_transmutation",
    "find_eigenvalues_spps",
    "fd_oracle",
    "oracle_spectrum",
]
