import numpy as np
import pytest

from lmg.errors import BasisMismatchError, InvalidParameterError
from lmg.spinops import (
    DickeBasis,
    OperatorMatrix,
    StateVector,
    basis_state,
    build_spin_ops,
    expectation,
    normalized_state,
    parity_operator,
    parity_sector_indices,
    rotation_about_x,
    y_basis_state,
    y_eigenbasis,
)


def comm(a, b):
    return a @ b - b @ a


@pytest.mark.parametrize("J", [0.5, 1.0, 1.5, 3.0, 7.5, 12.0])
def test_su2_algebra(J):
    jx, jy, jz = (o.mat for o in build_spin_ops(J))
    np.testing.assert_allclose(comm(jx, jy), 1j * jz, atol=1e-12)
    np.testing.assert_allclose(comm(jy, jz), 1j * jx, atol=1e-12)
    np.testing.assert_allclose(comm(jz, jx), 1j * jy, atol=1e-12)
    casimir = jx @ jx + jy @ jy + jz @ jz
    np.testing.assert_allclose(casimir, J * (J + 1) * np.eye(int(2 * J) + 1), atol=1e-12)


def test_ladder_convention():
    # ascending m ordering: J+ sits below the diagonal
    jx, jy, _ = (o.mat for o in build_spin_ops(1.0))
    jp = jx + 1j * jy
    assert jp[1, 0] == pytest.approx(np.sqrt(2))
    assert jp[2, 1] == pytest.approx(np.sqrt(2))
    assert np.abs(np.triu(jp)).max() == 0


def test_spin_half_matrices():
    jx, jy, jz = (o.mat for o in build_spin_ops(0.5))
    np.testing.assert_allclose(jz, np.diag([-0.5, 0.5]), atol=1e-15)
    np.testing.assert_allclose(jx, [[0, 0.5], [0.5, 0]], atol=1e-15)
    np.testing.assert_allclose(jy, [[0, 0.5j], [-0.5j, 0]], atol=1e-15)


def test_basis_m_values_and_index():
    b = DickeBasis(1.5)
    np.testing.assert_allclose(b.m_values, [-1.5, -0.5, 0.5, 1.5])
    assert b.index_of(-1.5) == 0
    assert b.index_of(1.5) == 3
    with pytest.raises(InvalidParameterError):
        b.index_of(0.0)
    with pytest.raises(InvalidParameterError):
        b.index_of(2.5)


def test_bad_spin_rejected():
    with pytest.raises(InvalidParameterError):
        DickeBasis(0.3)
    with pytest.raises(InvalidParameterError):
        DickeBasis(-1.0)
    with pytest.raises(InvalidParameterError):
        DickeBasis(1.0, axis="x")


def test_operator_matrix_hermitian_flag():
    b = DickeBasis(0.5)
    with pytest.raises(InvalidParameterError):
        OperatorMatrix(b, np.array([[0, 1], [0, 0]]), hermitian=True)
    OperatorMatrix(b, np.array([[0, 1], [0, 0]]))  # unflagged is fine


def test_state_norm_enforced():
    b = DickeBasis(0.5)
    with pytest.raises(InvalidParameterError):
        StateVector(b, np.array([1.0, 1.0]))
    s = normalized_state(b, np.array([1.0, 1.0]))
    assert np.linalg.norm(s.amplitudes) == pytest.approx(1.0)
    with pytest.raises(InvalidParameterError):
        normalized_state(b, np.array([0.0, 0.0]))


@pytest.mark.parametrize("J", [0.5, 1.0, 2.5, 6.0])
def test_y_eigenbasis_diagonalizes(J):
    _, jy, _ = (o.mat for o in build_spin_ops(J))
    u = y_eigenbasis(J).mat
    np.testing.assert_allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=1e-12)
    d = u.conj().T @ jy @ u
    np.testing.assert_allclose(d, np.diag(DickeBasis(J).m_values), atol=1e-10)


def test_y_eigenbasis_deterministic():
    a = y_eigenbasis(4.0).mat
    b = y_eigenbasis(4.0).mat
    assert np.array_equal(a, b)
    # pivot entries are real and positive
    for k in range(a.shape[1]):
        piv = np.argmax(np.round(np.abs(a[:, k]), 12))
        assert a[piv, k].imag == pytest.approx(0.0, abs=1e-14)
        assert a[piv, k].real > 0


def test_y_basis_state_spin_half():
    # |m_y=+1/2> = (|down> - i |up>)/sqrt(2) up to the pivot phase convention
    s = y_basis_state(0.5, 0.5).amplitudes
    _, jy, _ = (o.mat for o in build_spin_ops(0.5))
    np.testing.assert_allclose(jy @ s, 0.5 * s, atol=1e-12)
    assert abs(s[0] * np.conj(s[1]) - 0.5j) < 1e-12


def test_expectation_and_basis_mismatch():
    jx, jy, jz = build_spin_ops(1.0)
    s = basis_state(DickeBasis(1.0), 1.0)
    assert expectation(s, jz) == pytest.approx(1.0)
    other = basis_state(DickeBasis(1.5), 1.5)
    with pytest.raises(BasisMismatchError):
        expectation(other, jz)


@pytest.mark.parametrize("J", [1.0, 2.5, 5.0])
def test_parity_conjugation(J):
    jx, jy, jz = (o.mat for o in build_spin_ops(J))
    p = parity_operator(J).mat
    np.testing.assert_allclose(p @ jx @ p, -jx, atol=1e-12)
    np.testing.assert_allclose(p @ jy @ p, -jy, atol=1e-12)
    np.testing.assert_allclose(p @ jz @ p, jz, atol=1e-12)


def test_parity_sectors_partition():
    idx_p = parity_sector_indices(2.0, +1)
    idx_m = parity_sector_indices(2.0, -1)
    assert sorted(list(idx_p) + list(idx_m)) == [0, 1, 2, 3, 4]
    with pytest.raises(InvalidParameterError):
        parity_sector_indices(2.0, 0)


def test_rotation_about_x():
    J = 1.5
    jx, jy, jz = (o.mat for o in build_spin_ops(J))
    for theta in (0.3, np.pi / 2, np.pi):
        u = rotation_about_x(J, theta).mat
        np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
        rotated = u @ jz @ u.conj().T
        np.testing.assert_allclose(rotated, np.cos(theta) * jz - np.sin(theta) * jy,
                                   atol=1e-12)
