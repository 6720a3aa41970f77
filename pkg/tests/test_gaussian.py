import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from puritybounds import gaussian as gs
from puritybounds import oracles
from puritybounds.errors import CausticError, ContractViolation

A03 = gs.GaussianShape.from_blocks(1j, 1j, 0.3)


# -- shapes --------------------------------------------------------------
def test_shape_contracts():
    with pytest.raises(ContractViolation, match="symmetric"):
        gs.GaussianShape(1, 1, np.array([[1j, 0.3], [0.1, 1j]]))
    with pytest.raises(ContractViolation, match=r"smallest eigenvalue -0\.5"):
        gs.GaussianShape(1, 1, np.diag([1j, -0.5j]))
    with pytest.raises(ContractViolation, match="2x2"):
        gs.GaussianShape(1, 1, np.eye(3) * 1j)
    with pytest.raises(ContractViolation):
        gs.GaussianShape(0, 2, np.eye(2) * 1j)


def test_blocks_and_swap():
    a = gs.GaussianShape.from_blocks(np.diag([1j, 2j]), 3j, [[0.1], [0.2]])
    assert a.d == 3 and a.A12.shape == (2, 1) and a.A21.shape == (1, 2)
    np.testing.assert_array_equal(a.A21, a.A12.T)
    s = a.swapped()
    assert (s.d1, s.d2) == (1, 2)
    assert s.A11[0, 0] == 3j


def test_packet_normalization():
    shape = gs.GaussianShape.from_blocks(0.2 + 1j, 0.5j, 0.1)
    pk = gs.GaussianPacket(shape, X=[0.3, -0.1], P=[1.0, 0.5], hbar=0.7)
    x = np.linspace(-6, 6, 241)
    g = np.stack(np.meshgrid(x, x, indexing="ij"), axis=-1)
    dx = x[1] - x[0]
    assert np.sum(np.abs(pk(g)) ** 2) * dx * dx == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ContractViolation):
        gs.GaussianPacket(shape, X=[0, 0], P=[0, 0], hbar=0.0)
    with pytest.raises(ContractViolation):
        gs.GaussianPacket(shape, X=[0], P=[0, 0])


# -- purity --------------------------------------------------------------
@pytest.mark.parametrize("d1, d2", [(1, 1), (1, 2), (2, 2), (3, 1)])
def test_block_diagonal_purity_is_one(rng, d1, d2):
    a = gs.random_shape(d1, d2, rng, block_diagonal=True)
    assert abs(gs.purity_gaussian(a) - 1.0) < 1e-10


def test_purity_against_quadrature():
    p = gs.purity_gaussian(A03)
    q = oracles.gaussian_purity_quadrature(A03.A)
    assert abs(p - q) < 1e-6
    assert 0.0 < p < 1.0


def test_purity_matrix_shape():
    a = gs.random_shape(2, 3, np.random.default_rng(3))
    m = gs.purity_matrix(a)
    assert m.shape == (10, 10)


@pytest.mark.parametrize("d1, d2", [(1, 1), (1, 2), (2, 3)])
def test_swap_symmetry(rng, d1, d2):
    a = gs.random_shape(d1, d2, rng)
    assert abs(gs.purity_gaussian(a) - gs.purity_gaussian(a.swapped())) < 1e-10


def test_purity_decreases_with_coupling():
    vals = [gs.purity_gaussian(gs.GaussianShape.from_blocks(1j, 1j, c)) for c in (0.0, 0.1, 0.3, 0.6)]
    assert vals[0] == pytest.approx(1.0) and np.all(np.diff(vals) < 0)


# -- cross-correlation ---------------------------------------------------
@pytest.mark.parametrize("d1, d2", [(1, 1), (1, 2), (2, 2)])
def test_self_overlap_is_one(rng, d1, d2):
    b = gs.random_shape(d1, d2, rng, block_diagonal=True)
    assert abs(gs.cross_correlation_gaussian(b, b) - 1.0) < 1e-10


def test_normalization_factor_is_needed(rng):
    # without 4^d the same expression gives 4^-d for a self-overlap
    b = gs.random_shape(1, 2, rng, block_diagonal=True)
    raw = (np.linalg.det(b.A.imag) ** 2 / abs(np.linalg.det(b.A - b.A.conj())) ** 2)
    assert raw == pytest.approx(4.0 ** -3)


def test_separable_overlap():
    a = gs.GaussianShape(1, 1, np.diag([1j, 1j]))
    b = gs.GaussianShape(1, 1, np.diag([2j, 1j]))
    c = gs.cross_correlation_gaussian(a, b)
    assert abs(c - oracles.gaussian_overlap4_quadrature(a.A, b.A)) < 1e-6
    # one-dimensional overlap squared: 2 sqrt(1*2) / (1 + 2)
    assert c == pytest.approx(8.0 / 9.0, abs=1e-14)


def test_optimal_reference_strictly_below_purity():
    c = gs.cross_correlation_gaussian(A03, gs.optimal_reference(A03))
    assert 0 < gs.purity_gaussian(A03) - c
    assert abs(c - oracles.gaussian_overlap4_quadrature(A03.A, gs.optimal_reference(A03).A)) < 1e-6


def test_cross_correlation_contracts(rng):
    a = gs.random_shape(1, 1, rng)
    with pytest.raises(ContractViolation, match="block diagonal"):
        gs.cross_correlation_gaussian(a, a)
    with pytest.raises(ContractViolation, match="mismatch"):
        gs.cross_correlation_gaussian(a, gs.random_shape(1, 2, rng, block_diagonal=True))


def test_optimal_reference_of_product_is_itself(rng):
    a = gs.random_shape(2, 1, rng, block_diagonal=True)
    b = gs.optimal_reference(a)
    np.testing.assert_array_equal(a.A, b.A)
    assert gs.cross_correlation_gaussian(a, b) == pytest.approx(1.0, abs=1e-12)


def test_optimal_reference_beats_random_search():
    a = gs.GaussianShape.from_blocks(1j, 1j, 0.2)
    best = gs.cross_correlation_gaussian(a, gs.optimal_reference(a))
    rng = np.random.default_rng(11)
    worst = -np.inf
    for k in range(1000):
        if k % 2:
            b = gs.random_shape(1, 1, rng, block_diagonal=True)
        else:
            z = a.A.diagonal() + 0.3 * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
            b = gs.GaussianShape(1, 1, np.diag(z.real + 1j * np.abs(z.imag)))
        worst = max(worst, gs.cross_correlation_gaussian(a, b) - best)
    assert worst < 1e-4


def _true_optimum(a):
    def neg(x):
        b = gs.GaussianShape.from_blocks(x[0] + 1j * np.exp(x[1]), x[2] + 1j * np.exp(x[3]))
        return -gs.cross_correlation_gaussian(a, b)

    b11, b22 = a.A11[0, 0], a.A22[0, 0]
    x0 = [b11.real, np.log(b11.imag), b22.real, np.log(b22.imag)]
    res = minimize(neg, x0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 20000})
    return -res.fun


def test_leading_order_reference_misses_true_optimum_at_fourth_order():
    a11, a22, z12 = gs.EPS_FAMILY
    eps = np.array([0.2, 0.1, 0.05])
    gain = []
    for e in eps:
        a = gs.GaussianShape.from_blocks(a11, a22, e * z12)
        gain.append(_true_optimum(a) - gs.cross_correlation_gaussian(a, gs.optimal_reference(a)))
    gain = np.array(gain)
    assert np.all(gain > 0)
    slope = np.polyfit(np.log(eps), np.log(gain), 1)[0]
    assert abs(slope - 4.0) < 0.3


def test_leading_order_scaling():
    sc = gs.leading_order_scaling()
    assert abs(sc["slope"] - 4.0) < 0.2
    assert abs(sc["ratio"] - 1.0) < 0.01
    assert np.all(sc["crosscorr"] < sc["purity"])


@pytest.mark.parametrize("hbar", [0.5, 2.0])
def test_hbar_independence(rng, hbar):
    a = gs.random_shape(1, 1, rng)
    b = gs.random_shape(1, 1, rng, block_diagonal=True)
    assert abs(gs.purity_gaussian(a) - oracles.gaussian_purity_quadrature(a.A, hbar=hbar)) < 1e-6
    assert abs(gs.cross_correlation_gaussian(a, b)
               - oracles.gaussian_overlap4_quadrature(a.A, b.A, hbar=hbar)) < 1e-6


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), split=st.sampled_from([(1, 1), (1, 2), (2, 2), (2, 3)]))
def test_crosscorr_below_purity_property(seed, split):
    rng = np.random.default_rng(seed)
    a = gs.random_shape(*split, rng)
    b = gs.random_shape(*split, rng, block_diagonal=True)
    p = gs.purity_gaussian(a)
    assert 0.0 < p <= 1.0 + 1e-9
    assert gs.cross_correlation_gaussian(a, b) <= p + 1e-9
    assert gs.cross_correlation_gaussian(a, gs.optimal_reference(a)) <= p + 1e-9


# -- transport -----------------------------------------------------------
def test_symplectic_contract():
    with pytest.raises(ContractViolation, match="symplectic"):
        gs.SymplecticMap(np.diag([2.0, 2.0]))
    with pytest.raises(ContractViolation):
        gs.SymplecticMap(np.eye(3))


def test_identity_map(rng):
    a = gs.random_shape(1, 2, rng)
    out = gs.propagate_shape(a, gs.SymplecticMap(np.eye(6)))
    np.testing.assert_allclose(out.A, a.A, atol=1e-15)


def test_full_rotation_returns():
    a = gs.GaussianShape.from_blocks(0.3 + 0.8j, 1.2j)
    a1 = np.array([[0.3 + 0.8j]])
    rot = gs.rotation_map(2 * np.pi)
    m = rot.M
    out = 0.5 * (m[1, 0] + 2 * m[1, 1] * a1) / (m[0, 0] + 2 * m[0, 1] * a1)
    assert abs(out[0, 0] - a1[0, 0]) < 1e-10
    # two-dof version through the library routine
    c, s = m[0, 0], m[0, 1]
    big = gs.SymplecticMap(np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]]))
    np.testing.assert_allclose(gs.propagate_shape(a, big).A, a.A, atol=1e-10)


def test_harmonic_ground_state_is_stationary():
    # A = i/2 is the unit-frequency ground state, invariant under any rotation
    a = gs.GaussianShape(1, 1, 0.5j * np.eye(2))
    c, s = np.cos(0.7), np.sin(0.7)
    m = gs.SymplecticMap(np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]]))
    np.testing.assert_allclose(gs.propagate_shape(a, m).A, a.A, atol=1e-14)


def test_caustic_detected():
    a = gs.GaussianShape(1, 1, np.diag([-0.5 + 1e-15j, 1j]))
    c = s = np.sqrt(0.5)
    m = gs.SymplecticMap(np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]]))
    with pytest.raises(CausticError, match="caustic"):
        gs.propagate_shape(a, m)


def test_random_flow_keeps_shape_valid(rng):
    for _ in range(20):
        h = rng.standard_normal((4, 4))
        m = gs.quadratic_flow_map(h + h.T, t=0.4)
        a0 = gs.random_shape(1, 1, rng, block_diagonal=True)
        at = gs.propagate_shape(a0, m)
        assert np.min(np.linalg.eigvalsh(at.A.imag)) > 0
        assert gs.purity_gaussian(at) <= 1 + 1e-9


def test_transported_autocorrelation_scan():
    a0 = gs.GaussianShape(1, 1, np.diag([1j, 0.8j]))
    assert gs.transported_autocorrelation(a0, a0) == pytest.approx(1.0, abs=1e-12)
    for coupling in np.linspace(0.0, 0.3, 100):
        at = gs.propagate_shape(a0, gs.coupled_oscillators_map(2.0, coupling))
        p = gs.purity_gaussian(at)
        tr = gs.transported_autocorrelation(at, a0)
        opt = gs.cross_correlation_gaussian(at, gs.optimal_reference(at))
        assert tr <= p + 1e-9
        assert opt >= tr - 1e-9


def test_transported_autocorrelation_needs_product_start(rng):
    a = gs.random_shape(1, 1, rng)
    with pytest.raises(ContractViolation):
        gs.transported_autocorrelation(a, a)
