"""Quantum fidelity for one- and two-mode Gaussian states, the Bures distance,
the trace-norm sandwich, and the closed-form fidelities used by the
convergence bounds.

The general fidelity is computed from symplectic invariants of the pair
(V1, V2, delta = mean difference).  With W defined through

    W = Omega^T (V1 + V2)^{-1} (Omega + V2 Omega V1),

the eigenvalues of ``W Omega`` come in pairs ``+/- i w_k`` and

    F^4 = exp(-delta^T (V1 + V2)^{-1} delta)
          * prod_k (w_k + sqrt(w_k^2 - 1))^2 / det[(V1 + V2) / 2].

When either state is pure this reduces to the Gaussian overlap
``F^2 = Tr(rho sigma)``, which is evaluated directly for accuracy.  All
closed forms below are validated against this general routine in the tests.
"""

from __future__ import annotations

import dataclasses

import mpmath as mp
import numpy as np

from .errors import DomainError, InvalidDimensionError, SingularCoefficientError
from .symplectic import GaussianState, symplectic_form
from .teleportation import bk_added_noise

__all__ = [
    "BoundsPair",
    "gaussian_fidelity",
    "bures_distance",
    "fuchs_vdg",
    "fid_output_identity",
    "fid_env_C",
    "fid_env_D",
    "fid_env_A2",
    "b1_gamma",
    "fid_b2_asymptotic",
]

_PURITY_TOL = 1e-9


def _mean_factor(delta: np.ndarray, vsum: np.ndarray) -> float:
    if not np.any(delta):
        return 1.0
    return float(np.exp(-0.25 * delta @ np.linalg.solve(vsum, delta)))


def _spectral_w(vaux: np.ndarray, n: int) -> np.ndarray:
    moduli = np.sort(np.abs(np.linalg.eigvals(vaux @ symplectic_form(n))))
    # clamp at 1: exact purity produces w = 1 and roundoff must not push the
    # sqrt argument negative
    return np.maximum(moduli[::2], 1.0)


def gaussian_fidelity(s1: GaussianState, s2: GaussianState) -> float:
    """Bures fidelity ``F(rho1, rho2) = Tr sqrt(sqrt(rho2) rho1 sqrt(rho2))``
    for Gaussian states of the same mode count (1 or 2).

    Symmetric in its arguments, equal to 1 iff the states coincide, and
    includes the Gaussian factor for unequal mean vectors.
    """
    if s1.modes != s2.modes:
        raise InvalidDimensionError(
            f"mode counts differ: {s1.modes} vs {s2.modes}")
    n = s1.modes
    v1, v2 = s1.cm, s2.cm
    vsum = v1 + v2
    mean = _mean_factor(s2.mean - s1.mean, vsum)
    if s1.is_pure(_PURITY_TOL) or s2.is_pure(_PURITY_TOL):
        # overlap route: F^2 = Tr(rho sigma) when one state is pure
        overlap = 1.0 / np.sqrt(np.linalg.det(vsum / 2.0))
        return min(float(np.sqrt(overlap)) * mean, 1.0)
    omega = symplectic_form(n)
    vaux = omega.T @ np.linalg.solve(vsum, omega + v2 @ omega @ v1)
    w = _spectral_w(vaux, n)
    ftot4 = np.prod((w + np.sqrt(w * w - 1.0)) ** 2)
    f = float((ftot4 / np.linalg.det(vsum / 2.0)) ** 0.25)
    return min(f * mean, 1.0)


def _fidelity_mp(v1, v2, dps: int = 50) -> mp.mpf:
    """Extended-precision fidelity for zero-mean two-mode states.

    float64 loses the signal when CM entries reach ~1e5 (the determinant and
    near-unit eigenvalue moduli cancel catastrophically); the diverging-energy
    witnesses need mu_tilde up to 1e7 and beyond.
    """
    with mp.workdps(dps):
        v1 = mp.matrix(v1.tolist() if isinstance(v1, np.ndarray) else v1)
        v2 = mp.matrix(v2.tolist() if isinstance(v2, np.ndarray) else v2)
        dim = v1.rows
        omega = mp.matrix(dim, dim)
        for k in range(dim // 2):
            omega[2 * k, 2 * k + 1] = 1
            omega[2 * k + 1, 2 * k] = -1
        vsum = v1 + v2
        vaux = omega.T * (vsum ** -1) * (omega + v2 * omega * v1)
        eigs = mp.eig(vaux * omega, left=False, right=False)
        moduli = sorted(abs(e) for e in eigs)
        ftot4 = mp.mpf(1)
        for i in range(dim // 2):
            w = max(moduli[2 * i], mp.mpf(1))
            ftot4 *= (w + mp.sqrt(w * w - 1)) ** 2
        f4 = ftot4 / mp.det(vsum / 2)
        return min(f4 ** mp.mpf("0.25"), mp.mpf(1))


def bures_distance(s1: GaussianState, s2: GaussianState) -> float:
    """``d_B = sqrt(2 [1 - F])``; zero iff the states coincide."""
    return float(np.sqrt(2.0 * max(1.0 - gaussian_fidelity(s1, s2), 0.0)))


@dataclasses.dataclass(frozen=True)
class BoundsPair:
    """Trace-norm sandwich ``2(1 - F) <= ||rho - sigma|| <= 2 sqrt(1 - F^2)``."""

    lower: float
    upper: float


def fuchs_vdg(f: float) -> BoundsPair:
    """Trace-distance bounds implied by a fidelity value."""
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise DomainError(f"fidelity must lie in [0, 1], got {f}")
    return BoundsPair(lower=2.0 * (1.0 - f),
                      upper=2.0 * float(np.sqrt(max(1.0 - f * f, 0.0))))


def fid_output_identity(mu_tilde: float, mu: float) -> float:
    """Fidelity between a two-mode squeezed vacuum of variance ``mu_tilde``
    and its image under a ``mu``-resource teleporter acting on one arm.

    Closed form ``F = [1 + mu_tilde xi(mu) / 2]^{-1/2}``, the Gaussian overlap
    of the pure input with the output whose second diagonal block is raised
    by xi.  Scales as O(mu_tilde^{-1/2}) at fixed mu and as 1 - O(1/mu) at
    fixed mu_tilde: the two iterated limits disagree.
    """
    mu_tilde = float(mu_tilde)
    if mu_tilde < 1.0:
        raise DomainError(f"input variance must satisfy mu_tilde >= 1, got {mu_tilde}")
    return float(1.0 / np.sqrt(1.0 + mu_tilde * bk_added_noise(mu) / 2.0))


def _check_omega_r(omega: float, r: float) -> None:
    if omega < 1.0:
        raise DomainError(f"thermal variance must satisfy omega >= 1, got {omega}")
    if r <= 0.0:
        raise DomainError(f"squeezing parameter must be positive, got {r}")


def fid_env_C(gamma: float, omega: float, r: float) -> float:
    """Environmental fidelity for the attenuator/amplifier class: thermal
    state of variance omega against the CM ``omega I + gamma diag(r^2, 1/r^2)``.

    Equals 1 at gamma = 0; the infidelity vanishes quadratically in gamma
    (the Bures metric is second order in the perturbation), so the derived
    trace-norm bound ``2 sqrt(1 - F^2)`` is linear in gamma.
    """
    gamma, omega, r = float(gamma), float(omega), float(r)
    if gamma < 0.0:
        raise DomainError(f"gamma must be non-negative, got {gamma}")
    _check_omega_r(omega, r)
    t1 = np.sqrt((gamma * r ** 2 * omega + omega ** 2 + 1.0)
                 * (gamma * omega + r ** 2 * (omega ** 2 + 1.0)))
    t2 = np.sqrt((omega ** 2 - 1.0)
                 * (gamma * omega + gamma * r ** 4 * omega
                    + r ** 2 * (gamma ** 2 + omega ** 2 - 1.0)))
    return min(float(np.sqrt(2.0 * r) / np.sqrt(t1 - t2)), 1.0)


def _fid_env_C_mp(gamma, omega, r) -> mp.mpf:
    # same closed form in arbitrary precision; t1 - t2 cancels catastrophically
    # once omega ~ 1/(1 - tau) grows past ~1e5
    t1 = mp.sqrt((gamma * r ** 2 * omega + omega ** 2 + 1)
                 * (gamma * omega + r ** 2 * (omega ** 2 + 1)))
    t2 = mp.sqrt((omega ** 2 - 1)
                 * (gamma * omega + gamma * r ** 4 * omega
                    + r ** 2 * (gamma ** 2 + omega ** 2 - 1)))
    return mp.sqrt(2 * r) / mp.sqrt(t1 - t2)


def fid_env_D(kappa: float, omega: float, r: float) -> float:
    """Environmental fidelity for the amplifier-conjugate class: thermal
    state of variance omega against ``omega I - kappa diag(r^2, 1/r^2)`` with
    ``kappa <= 0``.  Coincides with :func:`fid_env_C` under gamma = -kappa.
    """
    kappa, omega, r = float(kappa), float(omega), float(r)
    if kappa > 0.0:
        raise DomainError(f"kappa must be non-positive, got {kappa}")
    _check_omega_r(omega, r)
    t1 = np.sqrt((-kappa * r ** 2 * omega + omega ** 2 + 1.0)
                 * (-kappa * omega + r ** 2 * (omega ** 2 + 1.0)))
    t2 = np.sqrt((1.0 - omega ** 2)
                 * (kappa * omega + kappa * r ** 4 * omega
                    - r ** 2 * (kappa ** 2 + omega ** 2 - 1.0)))
    return min(float(np.sqrt(2.0 * r) / np.sqrt(t1 - t2)), 1.0)


def fid_env_A2(xi: float, omega: float, a: float, c: float) -> float:
    """Environmental fidelity for the rank-one-transmission class: thermal
    state of variance omega against ``diag(xi (a^2 + c^2) + omega, omega)``."""
    xi, omega = float(xi), float(omega)
    if xi < 0.0:
        raise DomainError(f"xi must be non-negative, got {xi}")
    if omega < 1.0:
        raise DomainError(f"thermal variance must satisfy omega >= 1, got {omega}")
    s = xi * omega * (a * a + c * c)
    t1 = np.sqrt((omega ** 2 + 1.0) * (s + omega ** 2 + 1.0))
    t2 = np.sqrt((omega ** 2 - 1.0) * (s + omega ** 2 - 1.0))
    return min(float(np.sqrt(2.0) / np.sqrt(t1 - t2)), 1.0)


def b1_gamma(a: float, c: float, xi: float) -> float:
    """Leading coefficient of ``F^4 ~ gamma / mu_tilde`` for the witness that
    defeats uniform convergence of the unit-rank-noise class.

    In the vacuum-variance-1 convention used throughout,

        gamma = 2 (a^2 + c^2 + xi) / [xi (a^2 + c^2 + xi/2)^2],

    where (a, c) is the first row of the input-frame symplectic and xi the
    teleporter's added noise.  Verified against the extended-precision
    two-mode fidelity in the tests.
    """
    a, c, xi = float(a), float(c), float(xi)
    if xi < 0.0:
        raise DomainError(f"xi must be non-negative, got {xi}")
    if xi == 0.0:
        raise SingularCoefficientError("gamma diverges at xi = 0 (exact simulation)")
    s = a * a + c * c
    if s == 0.0:
        raise DomainError("(a, c) = (0, 0) is outside the witness family")
    return 2.0 * (s + xi) / (xi * (s + 0.5 * xi) ** 2)


def fid_b2_asymptotic(xi: float, xi_prime: float, r: float) -> float:
    """Leading term of the environmental fidelity for the additive-noise
    class, dilated as a beam splitter in the transparency limit.

    ``xi`` is the teleporter's added noise, ``xi_prime`` the channel's own
    added noise and ``r`` the input-frame squeezing; the remainder of the
    expansion is O(tau - 1).  The infidelity vanishes quadratically as
    xi -> 0, making the trace-norm bound linear in xi.
    """
    xi, xi_prime, r = float(xi), float(xi_prime), float(r)
    if xi <= 0.0 or xi_prime <= 0.0:
        raise DomainError("both noise parameters must be positive")
    if r <= 0.0:
        raise DomainError(f"squeezing parameter must be positive, got {r}")
    num = r * xi_prime * np.sqrt(xi * xi_prime * (1.0 + r ** 4)
                                 + r ** 2 * (xi ** 2 + xi_prime ** 2))
    den = 2.0 * xi * xi_prime * (1.0 + r ** 4) + r ** 2 * (xi ** 2 + 4.0 * xi_prime ** 2)
    return min(float(2.0 * np.sqrt(num / den)), 1.0)
