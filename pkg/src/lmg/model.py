"""Generalized collective-spin Hamiltonian: spectra, transfer cases, targets.

The Hamiltonian implemented here is

    H = xi * [ lam * chi1 * chi2 * Jz + chi1^2 Jx^2 + chi2^2 Jy^2
               - 2 * mu * chi2 * sqrt(chi2^2 - chi1^2) * Jy ].

Sign and scaling convention for the symmetry-breaking linear term
----------------------------------------------------------------
The linear-Jy coefficient is often quoted as +-2*mu*chi2^2.  Neither sign of
that form admits an exact zero mode of the annihilator

    A = chi1 Jx - i chi2 Jy + i sqrt(chi2^2 - chi1^2) mu

away from chi1 = 0: A is similar (via a non-unitary exp(tau Jz)) to
-i w (Jy - c/w) with w = sqrt(chi2^2 - chi1^2), so it is singular exactly when
its constant c is w times a Jy level.  The coefficient used here,
2*mu*chi2*w, is the unique member of the family that keeps the zero mode
pinned at |m_y = mu> for the whole coupling path.  It reduces to 2*mu*chi2^2
at chi1 = 0 (so all fixed-endpoint statements are unchanged), vanishes at
chi1 = chi2 (so the initial ground state is exactly the separable |m_z = -J>),
and for lam = 1 gives H/xi = A^dag A - (chi2^2 - chi1^2) mu^2 exactly, with
nondegenerate ground state

    |psi0> = N exp(-gamma Jz) |m_y = mu>,   tanh(gamma) = chi1/chi2,

and ground energy -xi (chi2^2 - chi1^2) mu^2.  The minus sign (rather than
+2 mu ... Jy) makes that ground state |m_y = +mu>, matching the chi1 -> 0
limit Hamiltonian chi2^2 (Jy^2 - 2 mu Jy).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, UnsupportedCaseError
from .spinops import (
    DickeBasis,
    OperatorMatrix,
    StateVector,
    _check_half_integer,
    basis_state,
    build_spin_ops,
    normalized_state,
    rotation_about_x,
    y_basis_state,
)

DEGENERACY_RTOL = 1e-8


@dataclass(frozen=True)
class LMGParams:
    """The five Hamiltonian parameters plus the total spin J.

    chi1 may be negative (it arises as a difference of Rabi amplitudes and
    crosses zero under tanh pulse schedules); only chi1^2, the product
    chi1*chi2 and sqrt(chi2^2-chi1^2) enter the Hamiltonian.
    """

    xi: float
    lam: float
    mu: float
    chi1: float
    chi2: float
    J: float

    def __post_init__(self):
        object.__setattr__(self, "J", _check_half_integer(self.J))
        if self.chi2 < 0:
            raise InvalidParameterError("chi2 must be non-negative")
        if self.chi1 == 0 and self.chi2 == 0:
            raise InvalidParameterError("chi1 and chi2 must not both vanish")
        if self.mu != 0 and abs(self.chi1) > self.chi2:
            raise InvalidParameterError(
                "the symmetry-breaking term requires |chi1| <= chi2 (sqrt(chi2^2-chi1^2))"
            )

    @property
    def N(self) -> int:
        return int(round(2 * self.J))


def _hamiltonian_matrix(xi, lam, mu, c1, c2, jx, jy, jz):
    """Raw Hamiltonian matrix from signed coupling amplitudes c1, c2."""
    h = lam * c1 * c2 * jz + c1 * c1 * (jx @ jx) + c2 * c2 * (jy @ jy)
    if mu != 0.0:
        w = math.sqrt(max(c2 * c2 - c1 * c1, 0.0))
        h = h - (2.0 * mu * c2 * w) * jy
    return xi * h


def build_hamiltonian(p: LMGParams) -> OperatorMatrix:
    """Hermitian Hamiltonian in the z-basis for the given parameters."""
    jx, jy, jz = build_spin_ops(p.J)
    h = _hamiltonian_matrix(p.xi, p.lam, p.mu, p.chi1, p.chi2, jx.mat, jy.mat, jz.mat)
    return OperatorMatrix(DickeBasis(p.J, "z"), h, hermitian=True)


def diagonal_limit_energies(p: LMGParams) -> np.ndarray:
    """Closed-form spectrum xi*chi^2*(lam*m - m^2 + J(J+1)) at chi1 = chi2, mu = 0.

    Returned in z-level order (ascending m), not sorted by energy.
    """
    if p.mu != 0 or p.chi1 != p.chi2:
        raise InvalidParameterError("closed form requires chi1 == chi2 and mu == 0")
    m = DickeBasis(p.J).m_values
    return p.xi * p.chi2**2 * (p.lam * m - m**2 + p.J * (p.J + 1))


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns match eigenvalues
    gap: float
    degeneracy_groups: tuple

    @property
    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, 0]


def spectrum(h: OperatorMatrix) -> SpectrumResult:
    """Full eigendecomposition with degeneracy grouping.

    Levels are grouped with relative tolerance 1e-8 * spectral range; for a
    flat spectrum the absolute scale of the eigenvalues is used instead.
    """
    if not h.hermitian:
        raise InvalidParameterError("spectrum requires a Hermitian operator")
    vals, vecs = np.linalg.eigh(h.mat)
    spread = vals[-1] - vals[0]
    tol = DEGENERACY_RTOL * (spread if spread > 0 else max(abs(vals[0]), 1.0))
    groups = []
    start = 0
    for k in range(1, len(vals) + 1):
        if k == len(vals) or vals[k] - vals[k - 1] > tol:
            groups.append(tuple(range(start, k)))
            start = k
    gap = float(vals[1] - vals[0]) if len(vals) > 1 else 0.0
    return SpectrumResult(vals, vecs, gap, tuple(groups))


@dataclass(frozen=True)
class CaseLabel:
    """Transfer-case tag plus the separable state the transfer starts from."""

    label: str  # one of "i", "ii", "iii", "iv"
    initial_state: StateVector
    initial_m: float
    warnings: tuple = ()


def classify_case(p: LMGParams, N=None) -> CaseLabel:
    """Classify (sign(xi), mu, parity of N) into transfer case i-iv.

    The initial separable state is the ground state of the chi1 = chi2
    endpoint, where the spectrum is the closed anharmonic form (the
    symmetry-breaking term vanishes there as well, so this is exact for all
    cases including iv).
    """
    if N is not None and int(N) != p.N:
        raise InvalidParameterError(f"N={N} inconsistent with J={p.J}")
    n = p.N
    if p.xi == 0:
        raise UnsupportedCaseError("xi = 0 matches no transfer case")
    if p.mu != 0 and p.xi < 0:
        raise UnsupportedCaseError("xi < 0 with mu != 0 matches no transfer case")
    if p.lam == 0:
        raise UnsupportedCaseError("lam = 0 leaves the initial ground state degenerate")

    notes = []
    if p.xi < 0:
        label = "i"
        if abs(p.lam) < n:
            notes.append(f"case i expects |lam| >= N; got |lam|={abs(p.lam)} < {n}")
    elif p.mu != 0:
        label = "iv"
        m_levels = DickeBasis(p.J).m_values
        if not np.any(np.abs(m_levels - p.mu) < 1e-9):
            raise UnsupportedCaseError(f"case iv requires mu to be a Jy level of J={p.J}")
        if abs(p.lam) < 1:
            notes.append(f"case iv expects |lam| >= 1; got {abs(p.lam)}")
    else:
        label = "ii" if n % 2 else "iii"
        if abs(p.lam) < 1:
            notes.append(f"case {label} expects |lam| >= 1; got {abs(p.lam)}")
    for msg in notes:
        warnings.warn(msg, stacklevel=2)

    m = DickeBasis(p.J).m_values
    diag = p.xi * (p.lam * m - m**2 + p.J * (p.J + 1))  # chi^2 scale drops out
    m0 = float(m[np.argmin(diag)])
    return CaseLabel(label, basis_state(DickeBasis(p.J), m0), m0, tuple(notes))


def _y_product_state(J, m_z_level) -> np.ndarray:
    """exp(-i pi/2 Jx)|m_z>: the symmetrized product of single-spin Jy eigenstates.

    The collective rotation acts as the same single-spin rotation on every
    site, so its image of a z-Dicke state carries the tensor-product phases of
    the single-spin |+>/|-> states; this fixes the relative phases of
    superposition targets without reference to any eigensolver convention.
    """
    basis = DickeBasis(J)
    return rotation_about_x(J, np.pi / 2).mat[:, basis.index_of(m_z_level)]


def target_state(case, N, m=None) -> StateVector:
    """Entangled target of the adiabatic transfer, in the z-basis.

    case i  : (|+...+> + e^{i pi J}|-...->)/sqrt(2)      (any N)
    case ii : (|m_y=+1/2> + i |m_y=-1/2>)/sqrt(2)        (odd N)
    case iii: |m_y=0>                                    (even N)
    case iv : |m_y=m>                                    (m supplied)
    """
    label = case.label if isinstance(case, CaseLabel) else str(case)
    N = int(N)
    J = N / 2.0
    basis = DickeBasis(J)
    if label == "iv":
        if m is None:
            raise InvalidParameterError("case iv requires the target level m")
    elif m is not None:
        raise InvalidParameterError("m is only meaningful for case iv")

    if label == "i":
        plus = _y_product_state(J, -J)  # k=N spins in |+>  ->  m_z = J-N = -J
        minus = _y_product_state(J, +J)
        amp = (plus + np.exp(1j * np.pi * J) * minus) / np.sqrt(2)
        return normalized_state(basis, amp)
    if label == "ii":
        if N % 2 == 0:
            raise InvalidParameterError("case ii requires an odd particle number")
        nham = (N + 1) // 2
        a = _y_product_state(J, J - nham)        # n pluses -> m_y = +1/2
        b = _y_product_state(J, J - (nham - 1))  # n-1 pluses -> m_y = -1/2
        return normalized_state(basis, (a + 1j * b) / np.sqrt(2))
    if label == "iii":
        if N % 2 == 1:
            raise InvalidParameterError("case iii requires an even particle number")
        return normalized_state(basis, _y_product_state(J, 0.0))
    if label == "iv":
        basis.index_of(m)  # validates m against the multiplet
        return normalized_state(basis, _y_product_state(J, -m))
    raise UnsupportedCaseError(f"unknown case label {label!r}")


def susy_gamma(p: LMGParams) -> float:
    """gamma with tanh(gamma) = chi1/chi2 for the factorized ground state."""
    if not (0 <= p.chi1 < p.chi2):
        raise InvalidParameterError("susy construction requires 0 <= chi1 < chi2")
    return math.atanh(p.chi1 / p.chi2)


def susy_ground_state(p: LMGParams) -> StateVector:
    """Exact ground state N exp(-gamma Jz)|m_y=mu> of the lam = 1 Hamiltonian.

    Requires lam = 1, xi > 0, 0 <= chi1 < chi2 and mu equal to a Jy level.
    The diagonal scaling is applied with the largest weight factored out, so
    the construction is overflow-safe for gamma*J well beyond float range.
    """
    if abs(p.lam - 1.0) > 1e-12:
        raise InvalidParameterError("susy construction requires lam = 1")
    if p.xi <= 0:
        raise InvalidParameterError("susy construction requires xi > 0")
    basis = DickeBasis(p.J)
    if not np.any(np.abs(basis.m_values - p.mu) < 1e-9):
        raise InvalidParameterError(f"mu={p.mu} is not a Jy level of J={p.J}")
    gamma = susy_gamma(p)
    m = basis.m_values
    weights = np.exp(-gamma * m - np.max(-gamma * m))
    return normalized_state(basis, weights * y_basis_state(p.J, p.mu).amplitudes)


def susy_ground_energy(p: LMGParams) -> float:
    """-xi (chi2^2 - chi1^2) mu^2; equals -xi chi2^2 mu^2 at the chi1=0 endpoint."""
    return -p.xi * (p.chi2**2 - p.chi1**2) * p.mu**2


def susy_residual(p: LMGParams, state: StateVector) -> float:
    """|| (chi1 Jx - i chi2 Jy + i sqrt(chi2^2-chi1^2) mu) |psi> ||.

    Vanishes exactly on the factorized ground state; on any state orthogonal
    to it the square of the residual is bounded below by (E - E0)/xi.
    """
    if abs(p.lam - 1.0) > 1e-12:
        raise InvalidParameterError("susy residual is defined for lam = 1")
    jx, jy, _ = build_spin_ops(p.J)
    w = math.sqrt(max(p.chi2**2 - p.chi1**2, 0.0))
    a = p.chi1 * jx.mat - 1j * p.chi2 * jy.mat + 1j * w * p.mu * np.eye(jx.dim)
    return float(np.linalg.norm(a @ state.amplitudes))
