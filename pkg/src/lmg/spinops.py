"""Collective angular-momentum operators on the symmetric (Dicke) subspace.

All matrices are dense and live in the J_z eigenbasis with levels ordered by
ascending magnetic quantum number m = -J, ..., +J.  With that ordering J_z is
an ascending diagonal and the raising operator J+ sits on the first
subdiagonal, <m+1|J+|m> = sqrt(J(J+1) - m(m+1)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BasisMismatchError, InvalidParameterError

HERMITICITY_TOL = 1e-12


def _check_half_integer(J) -> float:
    twoJ = 2.0 * float(J)
    if not np.isfinite(twoJ) or twoJ < 0 or abs(twoJ - round(twoJ)) > 1e-12:
        raise InvalidParameterError(f"total spin must be a non-negative half-integer, got J={J}")
    return round(twoJ) / 2.0


@dataclass(frozen=True)
class DickeBasis:
    """Basis of the spin-J multiplet, tagged by which component is diagonal."""

    J: float
    axis: str = "z"

    def __post_init__(self):
        object.__setattr__(self, "J", _check_half_integer(self.J))
        if self.axis not in ("z", "y"):
            raise InvalidParameterError(f"axis must be 'z' or 'y', got {self.axis!r}")

    @property
    def dim(self) -> int:
        return int(round(2 * self.J)) + 1

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in storage order (strictly ascending)."""
        return np.arange(self.dim) - self.J

    def index_of(self, m) -> int:
        idx = int(round(m + self.J))
        if not (0 <= idx < self.dim) or abs(m + self.J - idx) > 1e-12:
            raise InvalidParameterError(f"m={m} is not a level of the J={self.J} multiplet")
        return idx


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex square matrix over a tagged basis."""

    basis: object
    mat: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        mat = np.ascontiguousarray(np.asarray(self.mat, dtype=complex))
        object.__setattr__(self, "mat", mat)
        dim = self.basis.dim
        if mat.shape != (dim, dim):
            raise InvalidParameterError(f"matrix shape {mat.shape} does not match basis dim {dim}")
        if self.hermitian:
            scale = max(np.abs(mat).max(), 1.0)
            dev = np.abs(mat - mat.conj().T).max()
            if dev > HERMITICITY_TOL * scale:
                raise InvalidParameterError(
                    f"matrix flagged hermitian deviates from H=H^dag by {dev:.3e}"
                )

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitude vector over a tagged basis."""

    basis: object
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.ascontiguousarray(np.asarray(self.amplitudes, dtype=complex))
        object.__setattr__(self, "amplitudes", amp)
        if amp.shape != (self.basis.dim,):
            raise InvalidParameterError(
                f"amplitude shape {amp.shape} does not match basis dim {self.basis.dim}"
            )
        nrm = np.linalg.norm(amp)
        if abs(nrm - 1.0) > 1e-10:
            raise InvalidParameterError(f"state norm {nrm} deviates from 1 beyond 1e-10")


def normalized_state(basis, amplitudes) -> StateVector:
    """Build a StateVector, rescaling the amplitudes to unit norm."""
    amp = np.asarray(amplitudes, dtype=complex)
    nrm = np.linalg.norm(amp)
    if nrm == 0 or not np.isfinite(nrm):
        raise InvalidParameterError("cannot normalize a zero or non-finite amplitude vector")
    return StateVector(basis, amp / nrm)


def basis_state(basis: DickeBasis, m) -> StateVector:
    amp = np.zeros(basis.dim, dtype=complex)
    amp[basis.index_of(m)] = 1.0
    return StateVector(basis, amp)


def build_spin_ops(J):
    """Return (Jx, Jy, Jz) for the spin-J multiplet in the z-basis.

    Jz = diag(-J, ..., +J); Jx and Jy follow from J+- = Jx +- i Jy with the
    standard (real, positive) ladder matrix elements.
    """
    J = _check_half_integer(J)
    basis = DickeBasis(J, "z")
    m = basis.m_values
    ladder = np.sqrt(J * (J + 1) - m[:-1] * (m[:-1] + 1))  # <m+1|J+|m>
    jp = np.zeros((basis.dim, basis.dim), dtype=complex)
    jp[np.arange(1, basis.dim), np.arange(basis.dim - 1)] = ladder
    jm = jp.conj().T
    jx = (jp + jm) / 2.0
    jy = (jp - jm) / 2.0j
    jz = np.diag(m.astype(complex))
    return (
        OperatorMatrix(basis, jx, hermitian=True),
        OperatorMatrix(basis, jy, hermitian=True),
        OperatorMatrix(basis, jz, hermitian=True),
    )


def y_eigenbasis(J) -> OperatorMatrix:
    """Unitary whose columns are the J_y eigenstates, ordered by ascending m_y.

    Phase convention: in each column the entry of largest modulus (lowest
    z-level index on ties) is made real and positive.  The convention is
    deterministic, so repeated calls return bit-identical matrices.
    """
    _, jy, _ = build_spin_ops(J)
    vals, vecs = np.linalg.eigh(jy.mat)
    order = np.argsort(vals)
    vecs = vecs[:, order]
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        mags = np.abs(col)
        # round guards the tie-break against last-bit magnitude noise
        pivot = int(np.argmax(np.round(mags, 12)))
        phase = col[pivot] / abs(col[pivot])
        vecs[:, k] = col / phase
    return OperatorMatrix(DickeBasis(J, "z"), vecs, hermitian=False)


def y_basis_state(J, m_y) -> StateVector:
    """|m_y> expressed in the z-basis, with the y_eigenbasis phase convention."""
    basis = DickeBasis(J, "z")
    return StateVector(basis, y_eigenbasis(J).mat[:, basis.index_of(m_y)])


def expectation(state: StateVector, op: OperatorMatrix):
    """<psi|A|psi>.  Returns a float for Hermitian A, complex otherwise."""
    if state.basis != op.basis:
        raise BasisMismatchError(f"state basis {state.basis} != operator basis {op.basis}")
    val = np.vdot(state.amplitudes, op.mat @ state.amplitudes)
    if op.hermitian:
        scale = max(np.abs(op.mat).max(), 1.0)
        if abs(val.imag) > 1e-12 * scale:
            raise InvalidParameterError(f"imaginary expectation {val.imag:.3e} for Hermitian operator")
        return float(val.real)
    return complex(val)


def parity_operator(J) -> OperatorMatrix:
    """P = exp(i pi (Jz + J)); diagonal with entries (-1)^(m+J).

    Conjugation by P flips the sign of Jx and Jy, which is the selection rule
    behind the degenerate-pair transfer cases.
    """
    basis = DickeBasis(_check_half_integer(J), "z")
    signs = np.where((np.arange(basis.dim) % 2) == 0, 1.0, -1.0)
    return OperatorMatrix(basis, np.diag(signs.astype(complex)), hermitian=True)


def parity_sector_indices(J, sector: int) -> np.ndarray:
    """Indices of z-levels with parity eigenvalue `sector` (+1 or -1)."""
    if sector not in (+1, -1):
        raise InvalidParameterError("parity sector must be +1 or -1")
    basis = DickeBasis(_check_half_integer(J), "z")
    signs = np.where((np.arange(basis.dim) % 2) == 0, 1, -1)
    return np.nonzero(signs == sector)[0]


def rotation_about_x(J, angle) -> OperatorMatrix:
    """exp(-i angle Jx), computed through the eigendecomposition of Jx."""
    jx, _, _ = build_spin_ops(J)
    vals, vecs = np.linalg.eigh(jx.mat)
    u = (vecs * np.exp(-1j * angle * vals)) @ vecs.conj().T
    return OperatorMatrix(DickeBasis(_check_half_integer(J), "z"), u, hermitian=False)
