import numpy as np
import pytest

from lmg.errors import InvalidParameterError, UnsupportedCaseError
from lmg.model import (
    LMGParams,
    build_hamiltonian,
    classify_case,
    diagonal_limit_energies,
    spectrum,
    susy_gamma,
    susy_ground_energy,
    susy_ground_state,
    susy_residual,
    target_state,
)
from lmg.spinops import DickeBasis, build_spin_ops, parity_operator, y_basis_state


def test_params_validation():
    with pytest.raises(InvalidParameterError):
        LMGParams(1.0, 1.0, 0.0, 1.0, -0.5, 2.0)   # chi2 < 0
    with pytest.raises(InvalidParameterError):
        LMGParams(1.0, 1.0, 1.0, 1.5, 1.0, 2.0)    # mu != 0 needs |chi1| <= chi2
    LMGParams(1.0, 1.0, 0.0, -0.3, 1.0, 2.0)       # negative chi1 allowed at mu = 0


def test_hamiltonian_matches_operator_form():
    p = LMGParams(1.3, 2.0, 0.0, 0.4, 1.1, 1.5)
    jx, jy, jz = (o.mat for o in build_spin_ops(1.5))
    expected = p.xi * (p.lam * p.chi1 * p.chi2 * jz
                       + p.chi1**2 * jx @ jx + p.chi2**2 * jy @ jy)
    np.testing.assert_allclose(build_hamiltonian(p).mat, expected, atol=1e-12)


@pytest.mark.parametrize("N", [2, 5, 11])
def test_diagonal_limit(N):
    p = LMGParams(0.7, 3.0, 0.0, 0.9, 0.9, N / 2.0)
    h = build_hamiltonian(p).mat
    np.testing.assert_allclose(np.diag(h).real, diagonal_limit_energies(p), rtol=1e-12)
    assert np.abs(h - np.diag(np.diag(h))).max() < 1e-12 * np.abs(h).max()


def test_spectrum_pairing_mu_zero():
    # lam = 1, xi > 0, even N: every level except one is twofold degenerate
    p = LMGParams(1.0, 1.0, 0.0, 0.5, 1.0, 3.0)
    res = spectrum(build_hamiltonian(p))
    mult = sorted(len(g) for g in res.degeneracy_groups)
    assert mult == [1, 2, 2, 2]


def test_classify_cases():
    assert classify_case(LMGParams(-1.0, 5.0, 0.0, 1.0, 1.0, 1.0)).label == "i"
    assert classify_case(LMGParams(1.0, 1.0, 0.0, 1.0, 1.0, 1.5)).label == "ii"
    assert classify_case(LMGParams(1.0, 1.0, 0.0, 1.0, 1.0, 2.0)).label == "iii"
    assert classify_case(LMGParams(1.0, 1.0, 1.0, 0.5, 1.0, 2.0)).label == "iv"


def test_classify_initial_state_is_diagonal_ground():
    p = LMGParams(1.0, 2.0, 0.0, 1.0, 1.0, 2.0)
    case = classify_case(p)
    assert case.initial_m == -2.0
    e = diagonal_limit_energies(p)
    assert np.argmin(e) == DickeBasis(2.0).index_of(case.initial_m)


def test_classify_warnings_and_errors():
    with pytest.warns(UserWarning):
        classify_case(LMGParams(-1.0, 1.0, 0.0, 1.0, 1.0, 1.0))  # |lam| < N
    with pytest.raises(UnsupportedCaseError):
        classify_case(LMGParams(0.0, 1.0, 0.0, 1.0, 1.0, 1.0))
    with pytest.raises(UnsupportedCaseError):
        classify_case(LMGParams(-1.0, 1.0, 1.0, 0.5, 1.0, 2.0))  # xi < 0, mu != 0
    with pytest.raises(UnsupportedCaseError):
        classify_case(LMGParams(1.0, 1.0, 0.7, 0.5, 1.0, 2.0))   # mu not a level


def test_target_states_normalized_and_valid():
    for label, N, m in [("i", 4, None), ("i", 3, None), ("ii", 5, None),
                        ("iii", 4, None), ("iv", 4, 1.0)]:
        s = target_state(label, N, m=m)
        assert np.linalg.norm(s.amplitudes) == pytest.approx(1.0)
    with pytest.raises(InvalidParameterError):
        target_state("ii", 4)
    with pytest.raises(InvalidParameterError):
        target_state("iii", 5)
    with pytest.raises(InvalidParameterError):
        target_state("iv", 4)          # missing m
    with pytest.raises(InvalidParameterError):
        target_state("iii", 4, m=1.0)  # m given for a non-iv case


def test_target_case_iii_is_my_zero():
    s = target_state("iii", 6)
    ref = y_basis_state(3.0, 0.0)
    assert abs(np.vdot(ref.amplitudes, s.amplitudes)) == pytest.approx(1.0)


def test_target_case_iv_is_my_level():
    s = target_state("iv", 4, m=1.0)
    _, jy, _ = build_spin_ops(2.0)
    np.testing.assert_allclose(jy.mat @ s.amplitudes, 1.0 * s.amplitudes, atol=1e-10)


def test_target_case_i_parity_even_N():
    # for even N the GHZ-type superposition lies in a single parity sector
    for N in (2, 4, 6):
        s = target_state("i", N)
        p = parity_operator(N / 2.0).mat
        val = np.vdot(s.amplitudes, p @ s.amplitudes).real
        assert abs(abs(val) - 1.0) < 1e-12


def test_susy_ground_state_exact():
    rng = np.random.default_rng(7)
    for _ in range(20):
        J = rng.integers(2, 7) / 1.0
        chi2 = rng.uniform(0.5, 2.0)
        chi1 = rng.uniform(0.0, 0.95) * chi2
        levels = DickeBasis(J).m_values
        mu = float(rng.choice(levels))
        p = LMGParams(rng.uniform(0.2, 2.0), 1.0, mu, chi1, chi2, J)
        psi = susy_ground_state(p)
        res = susy_residual(p, psi)
        assert res <= 1e-10 * (p.chi1 + p.chi2) * p.J
        vals, vecs = np.linalg.eigh(build_hamiltonian(p).mat)
        assert vals[0] == pytest.approx(susy_ground_energy(p), abs=1e-9 * max(abs(vals).max(), 1.0))
        fid = abs(np.vdot(vecs[:, 0], psi.amplitudes)) ** 2
        assert fid >= 1.0 - 1e-10


def test_susy_gamma_relation():
    p = LMGParams(1.0, 1.0, 1.0, 0.6, 1.0, 2.0)
    assert np.tanh(susy_gamma(p)) == pytest.approx(p.chi1 / p.chi2)


def test_susy_requires_lam_one():
    p = LMGParams(1.0, 2.0, 1.0, 0.5, 1.0, 2.0)
    with pytest.raises(InvalidParameterError):
        susy_ground_state(p)
