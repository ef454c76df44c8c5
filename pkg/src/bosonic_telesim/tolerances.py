"""Default numerical tolerances, overridable per call throughout the API."""

from __future__ import annotations

import dataclasses


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Bundle of the tolerances used by validation and classification.

    symmetry      absolute bound on |M - M^T| entries
    symplectic    absolute bound on |S Omega S^T - Omega| entries
    uncertainty   symplectic eigenvalues must satisfy nu >= 1 - uncertainty
    rank          singular values below rank * max(s_max, 1) count as zero
    tau_boundary  |tau| <= tau_boundary is tau = 0; |tau - 1| likewise tau = 1
    """

    symmetry: float = 1e-12
    symplectic: float = 1e-10
    uncertainty: float = 1e-9
    rank: float = 1e-10
    tau_boundary: float = 1e-9

    @classmethod
    def uniform(cls, tol: float) -> "Tolerances":
        """All fields set to a single value (CLI --tol / env-var override)."""
        return cls(symmetry=tol, symplectic=tol, uncertainty=tol,
                   rank=tol, tau_boundary=tol)


DEFAULT = Tolerances()
