"""Phase-space linear algebra for Gaussian states of one and two bosonic modes.

Conventions used throughout the package: quadratures are ordered
``(q1, p1, ..., qn, pn)``, the commutator is ``[x_l, x_m] = 2i Omega_lm`` and
the vacuum covariance matrix (CM) is the identity.  A CM ``V`` describes a
physical state iff ``V + i Omega >= 0``, equivalently all symplectic
eigenvalues satisfy ``nu_k >= 1`` with ``V > 0``.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from scipy.linalg import schur

from .errors import DomainError, InvalidDimensionError, ValidationError
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "GaussianState",
    "SymplecticMatrix",
    "WilliamsonDecomposition",
    "BlochMessiah2x2",
    "symplectic_form",
    "is_symplectic",
    "symplectic_eigenvalues",
    "williamson",
    "bloch_messiah_2x2",
    "tmsv_state",
    "thermal_state",
    "apply_affine",
    "partial_trace",
    "tensor_states",
    "random_symplectic",
    "random_state",
]


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidDimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_even(dim: int) -> int:
    if dim < 2 or dim % 2 != 0:
        raise InvalidDimensionError(f"dimension must be a positive even integer, got {dim}")
    return dim // 2


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def symplectic_form(n: int):
    """The 2n x 2n symplectic form: a direct sum of [[0, 1], [-1, 0]] blocks."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidDimensionError(f"mode count must be a positive integer, got {n!r}")
    omega = np.zeros((2 * n, 2 * n))
    for k in range(n):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def is_symplectic(m, tol: float | None = None) -> bool:
    """True iff ``max|M Omega M^T - Omega| <= tol``."""
    m = _as_matrix(m)
    n = _check_even(m.shape[0])
    if tol is None:
        tol = DEFAULT.symplectic
    omega = symplectic_form(n)
    return bool(np.max(np.abs(m @ omega @ m.T - omega)) <= tol)


def _check_symmetric(v: np.ndarray, tol: float, what: str = "matrix") -> None:
    if np.max(np.abs(v - v.T)) > tol:
        raise ValidationError(f"{what} is not symmetric within tolerance {tol:g}")


def symplectic_eigenvalues(cm, tol: Tolerances | None = None):
    """Symplectic spectrum of a symmetric matrix: the moduli of the eigenvalues
    of ``Omega V``, one per mode, sorted in descending order.

    For a valid CM the product of the spectrum equals ``sqrt(det V)``.
    """
    cm = _as_matrix(cm)
    n = _check_even(cm.shape[0])
    tol = tol or DEFAULT
    _check_symmetric(cm, tol.symmetry, "covariance matrix")
    moduli = np.sort(np.abs(np.linalg.eigvals(symplectic_form(n) @ cm)))[::-1]
    # eigenvalues of Omega V come in +/- i nu pairs; keep one of each
    return moduli[::2].copy()


@dataclasses.dataclass(frozen=True)
class GaussianState:
    """Gaussian state of ``n`` modes: mean quadrature vector and CM.

    Construction validates symmetry, positive definiteness and the uncertainty
    principle (``nu_k >= 1`` up to the default tolerance).  Instances are
    immutable; the stored arrays are read-only.
    """

    mean: np.ndarray
    cm: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cm = _as_matrix(self.cm)
        n = _check_even(cm.shape[0])
        if mean.shape[0] != 2 * n:
            raise InvalidDimensionError(
                f"mean has length {mean.shape[0]}, CM is {2 * n} x {2 * n}")
        _check_symmetric(cm, DEFAULT.symmetry, "covariance matrix")
        cm = 0.5 * (cm + cm.T)
        if np.min(np.linalg.eigvalsh(cm)) <= 0.0:
            raise ValidationError("covariance matrix is not positive definite")
        nus = np.sort(np.abs(np.linalg.eigvals(symplectic_form(n) @ cm)))[::2]
        # eigenvalue roundoff grows with the matrix scale
        slack = DEFAULT.uncertainty * max(1.0, float(np.max(np.abs(cm))))
        if np.min(nus) < 1.0 - slack:
            raise ValidationError(
                f"uncertainty principle violated: min symplectic eigenvalue "
                f"{np.min(nus):.12g} < 1")
        object.__setattr__(self, "mean", _readonly(mean))
        object.__setattr__(self, "cm", _readonly(cm))

    @property
    def modes(self) -> int:
        return self.cm.shape[0] // 2

    @classmethod
    def vacuum(cls, n: int = 1) -> "GaussianState":
        return cls(np.zeros(2 * n), np.eye(2 * n))

    def symplectic_spectrum(self):
        return symplectic_eigenvalues(self.cm)

    def is_pure(self, tol: float = 1e-9) -> bool:
        return bool(np.max(self.symplectic_spectrum()) <= 1.0 + tol)


@dataclasses.dataclass(frozen=True)
class SymplecticMatrix:
    """Real matrix S with ``S Omega S^T = Omega`` (det S = +1 follows)."""

    s: np.ndarray
    tol: dataclasses.InitVar[float | None] = None

    def __post_init__(self, tol):
        s = _as_matrix(self.s)
        if not is_symplectic(s, tol):
            raise ValidationError("matrix is not symplectic within tolerance")
        object.__setattr__(self, "s", _readonly(s))

    @property
    def modes(self) -> int:
        return self.s.shape[0] // 2


@dataclasses.dataclass(frozen=True)
class WilliamsonDecomposition:
    """Symplectic S and spectrum (nu_1 >= ... >= nu_n) with
    ``S V S^T = diag(nu_1, nu_1, ..., nu_n, nu_n)``."""

    s: SymplecticMatrix
    spectrum: tuple

    def diagonal(self) -> np.ndarray:
        return np.diag(np.repeat(self.spectrum, 2))


@dataclasses.dataclass(frozen=True)
class BlochMessiah2x2:
    """Euler factorization S = O1 (r, 1/r) O2 of a single-mode symplectic,
    with O1, O2 rotations and r >= 1."""

    o1: np.ndarray
    sq: np.ndarray
    o2: np.ndarray

    @property
    def r(self) -> float:
        return float(self.sq[0, 0])


def tmsv_state(mu: float) -> GaussianState:
    """Two-mode squeezed vacuum with variance parameter ``mu >= 1``.

    Diagonal blocks ``mu I`` and off-diagonal blocks ``sqrt(mu^2 - 1) Z``;
    the state is pure and reduces to a thermal state of variance ``mu`` on
    either mode.
    """
    mu = float(mu)
    if mu < 1.0:
        raise DomainError(f"TMSV variance parameter must satisfy mu >= 1, got {mu}")
    s = np.sqrt(mu * mu - 1.0)
    z = np.diag([1.0, -1.0])
    cm = np.zeros((4, 4))
    cm[:2, :2] = mu * np.eye(2)
    cm[2:, 2:] = mu * np.eye(2)
    cm[:2, 2:] = s * z
    cm[2:, :2] = s * z
    return GaussianState(np.zeros(4), cm)


def thermal_state(omega: float) -> GaussianState:
    """Single-mode thermal state with CM ``omega I``; ``omega = 2 nbar + 1``."""
    omega = float(omega)
    if omega < 1.0:
        raise DomainError(f"thermal variance must satisfy omega >= 1, got {omega}")
    return GaussianState(np.zeros(2), omega * np.eye(2))


def apply_affine(state: GaussianState, s, d=None) -> GaussianState:
    """Affine phase-space map: mean -> S mean + d, CM -> S CM S^T."""
    mat = s.s if isinstance(s, SymplecticMatrix) else SymplecticMatrix(s).s
    if mat.shape[0] != state.cm.shape[0]:
        raise InvalidDimensionError(
            f"symplectic is {mat.shape[0]}-dimensional, state is "
            f"{state.cm.shape[0]}-dimensional")
    d = np.zeros(mat.shape[0]) if d is None else np.asarray(d, dtype=float).reshape(-1)
    if d.shape[0] != mat.shape[0]:
        raise InvalidDimensionError("displacement length does not match state dimension")
    return GaussianState(mat @ state.mean + d, mat @ state.cm @ mat.T)


def partial_trace(state: GaussianState, keep: int) -> GaussianState:
    """Reduce a two-mode state to the mode ``keep`` (0 or 1) by deleting the
    rows and columns of the other mode."""
    if state.modes != 2:
        raise InvalidDimensionError("partial_trace expects a two-mode state")
    if keep not in (0, 1):
        raise DomainError(f"keep must be 0 or 1, got {keep!r}")
    sl = slice(2 * keep, 2 * keep + 2)
    return GaussianState(state.mean[sl], state.cm[sl, sl])


def tensor_states(a: GaussianState, b: GaussianState) -> GaussianState:
    """Product state: concatenated means, block-diagonal CM."""
    na, nb = 2 * a.modes, 2 * b.modes
    cm = np.zeros((na + nb, na + nb))
    cm[:na, :na] = a.cm
    cm[na:, na:] = b.cm
    return GaussianState(np.concatenate([a.mean, b.mean]), cm)


def _inv_sqrt_spd(v: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(v)
    if vals[0] <= 0.0:
        raise ValidationError("matrix is not positive definite")
    return (vecs / np.sqrt(vals)) @ vecs.T


def williamson(cm, tol: Tolerances | None = None) -> WilliamsonDecomposition:
    """Williamson decomposition of a positive-definite symmetric matrix.

    Returns ``(S, spectrum)`` with ``S V S^T = diag(nu_1, nu_1, ...)`` and the
    spectrum sorted in descending order.  For one mode the closed form
    ``S = sqrt(nu) V^{-1/2}`` is used; for more modes the symplectic basis is
    taken from the real Schur form of ``V^{-1/2} Omega V^{-1/2}``, which keeps
    every intermediate transformation orthogonal.  The reconstruction residual
    is verified before returning.
    """
    cm = _as_matrix(cm)
    n = _check_even(cm.shape[0])
    tol = tol or DEFAULT
    _check_symmetric(cm, tol.symmetry, "covariance matrix")
    cm = 0.5 * (cm + cm.T)
    if np.min(np.linalg.eigvalsh(cm)) <= 0.0:
        raise ValidationError("matrix is not positive definite")

    if n == 1:
        nu = float(np.sqrt(np.linalg.det(cm)))
        s = np.sqrt(nu) * _inv_sqrt_spd(cm)
        spectrum = (nu,)
    else:
        vm12 = _inv_sqrt_spd(cm)
        a = vm12 @ symplectic_form(n) @ vm12  # antisymmetric
        t, q = schur(0.5 * (a - a.T))
        lams = []
        for k in range(n):
            b = t[2 * k, 2 * k + 1]
            if b < 0.0:  # flip the block so the off-diagonal entry is positive
                q[:, [2 * k, 2 * k + 1]] = q[:, [2 * k + 1, 2 * k]]
                b = -b
            lams.append(b)
        nus = 1.0 / np.asarray(lams)
        order = np.argsort(nus)[::-1]
        perm = np.concatenate([[2 * k, 2 * k + 1] for k in order])
        q = q[:, perm]
        nus = nus[order]
        d_half = np.repeat(np.sqrt(nus), 2)
        s = d_half[:, None] * (q.T @ vm12)
        spectrum = tuple(float(x) for x in nus)

    target = np.diag(np.repeat(spectrum, 2))
    resid = np.max(np.abs(s @ cm @ s.T - target))
    if resid > 1e-8 * max(1.0, float(np.max(np.abs(cm)))):
        raise ValidationError(f"Williamson reconstruction residual too large: {resid:g}")
    return WilliamsonDecomposition(SymplecticMatrix(s), spectrum)


def bloch_messiah_2x2(s, tol: float | None = None) -> BlochMessiah2x2:
    """Rotation-squeeze-rotation factorization of a 2x2 symplectic matrix.

    Canonical gauge: ``r >= 1`` from the SVD and the sign ambiguity resolved
    by requiring a non-negative (1, 1) entry of O2.  Consumers must not rely
    on a specific gauge beyond the reconstruction identity.
    """
    mat = s.s if isinstance(s, SymplecticMatrix) else _as_matrix(s)
    if mat.shape != (2, 2):
        raise InvalidDimensionError("bloch_messiah_2x2 expects a 2x2 matrix")
    if not is_symplectic(mat, tol):
        raise ValidationError("input matrix is not symplectic")
    u, sing, vt = np.linalg.svd(mat)
    # det u * det vt = det(mat) / det(diag) = +1; make both rotations
    if np.linalg.det(u) < 0.0:
        u = u @ np.diag([1.0, -1.0])
        vt = np.diag([1.0, -1.0]) @ vt
    if vt[0, 0] < 0.0:
        u, vt = -u, -vt
    return BlochMessiah2x2(o1=_readonly(u), sq=_readonly(np.diag(sing)), o2=_readonly(vt))


def random_symplectic(n: int, rng: np.random.Generator, max_squeeze: float = 2.0):
    """Haar-rotation x squeezing x Haar-rotation random symplectic matrix."""
    def _orthogonal_symplectic():
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        q, r = np.linalg.qr(g)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        x, y = q.real, q.imag
        o = np.zeros((2 * n, 2 * n))
        for i in range(n):
            for j in range(n):
                o[2 * i, 2 * j] = x[i, j]
                o[2 * i, 2 * j + 1] = -y[i, j]
                o[2 * i + 1, 2 * j] = y[i, j]
                o[2 * i + 1, 2 * j + 1] = x[i, j]
        return o

    rs = rng.uniform(1.0, max_squeeze, size=n)
    sq = np.diag(np.concatenate([[r, 1.0 / r] for r in rs]))
    return _orthogonal_symplectic() @ sq @ _orthogonal_symplectic()


def random_state(n: int, rng: np.random.Generator, nu_max: float = 3.0,
                 max_squeeze: float = 2.0, displace: float = 0.0) -> GaussianState:
    """Random valid Gaussian state: a symplectic congruence of a thermal CM."""
    s = random_symplectic(n, rng, max_squeeze)
    nus = rng.uniform(1.0, nu_max, size=n)
    cm = s @ np.diag(np.repeat(nus, 2)) @ s.T
    mean = displace * rng.normal(size=2 * n) if displace else np.zeros(2 * n)
    return GaussianState(mean, 0.5 * (cm + cm.T))
