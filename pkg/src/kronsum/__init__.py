"""Numerical probes of the top-two squared singular values of Kronecker sums.

For traceless ``A``, ``B`` with ``tr A^H A + tr B^H B = 1/d`` the package
evaluates ``sigma_1^2 + sigma_2^2`` of ``X = A (x) I + I (x) B``, checks the
closed forms known for structured families, and searches for large values.
"""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    ConstraintViolation,
    DegenerateInputError,
    EigensolverError,
    InvalidFamilyError,
    KronsumError,
    NotHermitianError,
    NotUnitaryError,
)
from .matrix import (  # noqa: E402
    ConstrainedPair,
    SymmetryOp,
    apply_symmetry,
    build_x,
    build_x_unchecked,
    kron,
    project_to_constraints,
    random_feasible_pair,
)
from .spectrum import SpectrumReport, h_split, objective, top_two_sum  # noqa: E402
