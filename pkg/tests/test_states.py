import math

import numpy as np
import pytest

from entlab import linalg as la
from entlab import measures as ms
from entlab import states as stt
from entlab.errors import ContractError, DimensionError, DomainError

from . import oracles


def test_max_entangled():
    psi = stt.max_entangled(2)
    np.testing.assert_allclose(psi.vec, np.array([1, 0, 0, 1]) / math.sqrt(2))
    for d in (2, 3, 4):
        rho = stt.max_entangled(d).dm()
        for keep in (0, 1):
            np.testing.assert_allclose(rho.ptrace(keep).mat, np.eye(d) / d, atol=1e-15)
    assert ms.concurrence(stt.max_entangled(2).dm()) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        stt.max_entangled(1)


def test_werner():
    np.testing.assert_allclose(stt.werner(0).mat, np.eye(4) / 4)
    np.testing.assert_allclose(stt.werner(1).mat, stt.p_plus().mat)
    # boundary q = 1/3: zero concurrence and PT spectrum touching zero
    rho = stt.werner(1 / 3)
    assert oracles.concurrence(rho.mat) == pytest.approx(0.0, abs=1e-8)
    assert oracles.pt_min_eig(rho.mat) == pytest.approx(0.0, abs=1e-15)
    for q in (-0.1, 1.1):
        with pytest.raises(DomainError):
            stt.werner(q)


@pytest.mark.parametrize("q", np.linspace(0, 1, 11))
def test_werner_fidelity(q):
    psi = stt.max_entangled(2).vec
    assert np.vdot(psi, stt.werner(q).mat @ psi).real == pytest.approx(q + (1 - q) / 4, abs=1e-12)


def test_schmidt_pure():
    assert ms.concurrence(stt.schmidt_pure(1.0).dm()) == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(stt.schmidt_pure(1 / math.sqrt(2)).vec, stt.max_entangled(2).vec, atol=1e-15)
    assert ms.concurrence(stt.schmidt_pure(0.8).dm()) == pytest.approx(0.96, abs=1e-12)
    for a in np.linspace(0, 1, 9):
        red = stt.schmidt_pure(a).dm().ptrace(0).mat
        np.testing.assert_allclose(red, np.diag([a * a, 1 - a * a]), atol=1e-12)
    with pytest.raises(DomainError):
        stt.schmidt_pure(1.5)


def test_ghz():
    psi = stt.ghz()
    assert psi.dims == (2, 2, 2)
    rho_ab = psi.dm().ptrace([0, 1])
    expected = 0.5 * (la.projector(la.ket(0, (2, 2))) + la.projector(la.ket(3, (2, 2))))
    np.testing.assert_allclose(rho_ab.mat, expected, atol=1e-15)
    assert ms.concurrence(rho_ab) == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(psi.dm().ptrace(0).mat, np.eye(2) / 2)


def test_four_qubit_states():
    r1, r2 = stt.four_qubit_rho1(), stt.four_qubit_rho2()
    assert np.trace(r1.mat) == pytest.approx(1) and np.trace(r2.mat) == pytest.approx(1)
    np.testing.assert_allclose(r2.ptrace([0, 1]).mat, np.eye(4) / 4, atol=1e-15)
    # oracle: build in A, B, A', B' with explicit kron, reorder by index loops
    pp = oracles.werner(1.0)
    zero = np.diag([1.0, 0.0])
    built = oracles.kron_all(zero, zero, pp)  # A B A' B'
    reordered = np.zeros((16, 16), dtype=complex)
    for r in range(16):
        for c in range(16):
            a, b, a2, b2 = oracles.digits(r, (2, 2, 2, 2))
            x, y, x2, y2 = oracles.digits(c, (2, 2, 2, 2))
            reordered[oracles.flat((a, a2, b, b2), (2,) * 4), oracles.flat((x, x2, y, y2), (2,) * 4)] = built[r, c]
    np.testing.assert_allclose(r1.mat, reordered)
    assert oracles.negativity(r1.mat, (2, 2, 2, 2), (2, 3)) == pytest.approx(1.0, abs=1e-12)
    assert ms.negativity(r1, stt.FOUR_QUBIT_CUT) == pytest.approx(1.0, abs=1e-12)


def test_random_states_deterministic():
    a = stt.random_density((2, 2), 3, seed=7)
    b = stt.random_density((2, 2), 3, seed=7)
    assert a.mat.tobytes() == b.mat.tobytes()
    assert stt.random_pure((2, 3), 5).vec.tobytes() == stt.random_pure((2, 3), 5).vec.tobytes()
    assert not np.allclose(stt.random_density((2, 2), 4, 1).mat, stt.random_density((2, 2), 4, 2).mat)


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_random_density_valid(rank):
    for seed in range(50):
        rho = stt.random_density((2, 2), rank, seed)
        w = rho.eigvals()
        assert w[-1] >= -la.TOL_PSD
        assert w.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.sum(w > 1e-10) == rank


def test_random_density_rank_bounds():
    with pytest.raises(DomainError):
        stt.random_density((2, 2), 5, 0)
    with pytest.raises(DomainError):
        stt.random_density((2, 2), 0, 0)


def test_random_density_mean_purity():
    # Hilbert-Schmidt average purity (d + r)/(d r + 1) with d = r = 4 is 8/17
    purity = np.mean([stt.random_density((2, 2), 4, s).purity() for s in range(10_000)])
    assert purity == pytest.approx(8 / 17, abs=0.01)


def test_density_validation():
    with pytest.raises(ContractError):
        stt.DensityMatrix(np.diag([0.5, 0.6, 0, 0]), (2, 2))
    with pytest.raises(ContractError):
        stt.DensityMatrix(np.diag([1.5, -0.5, 0, 0]), (2, 2))
    with pytest.raises(ContractError):
        stt.DensityMatrix(np.array([[0.5, 0.1], [0.3, 0.5]]), (2,))
    with pytest.raises(DimensionError):
        stt.DensityMatrix(np.eye(4) / 4, (2, 3))
    with pytest.raises(ContractError):
        stt.PureState(np.array([1.0, 1.0]), (2,))
    rho = stt.werner(0.5)
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 1.0


def test_every_constructor_validates():
    objs = [stt.max_entangled(3).dm(), stt.werner(0.3), stt.schmidt_pure(0.4).dm(), stt.ghz().dm(),
            stt.four_qubit_rho1(), stt.four_qubit_rho2(), stt.random_pure((2, 2, 2), 3).dm(),
            stt.random_density((3, 2), 2, 3)]
    for o in objs:
        stt.validate_density(o.mat)
