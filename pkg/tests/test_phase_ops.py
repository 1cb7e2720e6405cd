import math

import mpmath
import numpy as np
import pytest

from phasekit.errors import NonPositiveSpectrum
from phasekit.fock_core import (
    ComplexOperator,
    angular_momentum,
    build_basis,
    fock_state,
    transformed_ladder,
)
from phasekit.phase_ops import (
    amplitude_gram,
    amplitude_operator,
    forward_phase_operator,
    herm_inv_sqrt,
    interior_unitarity,
    phase_operator,
    phase_sequence,
    phase_sequence_recurrence,
    phase_sequence_table,
    restrict_forward,
    selection_rule_violation,
    sg_operator,
)

# Forward elements <(n,0)|E|(n+1,0)> vs a_n at N_max = 40 for n < 20.
# Measured max |diff|: N=20 2.8e-3 (n<10), N=30 1.6e-3 (n<15), N=40 1.07e-3.
FORWARD_ELEMENT_TOL = 2e-3


@pytest.fixture(scope="module")
def b6():
    return build_basis(6)


# ---- amplitude operator

def test_amplitude_examples(b6):
    k = 2.0
    amp = amplitude_operator(b6, k)
    vac = fock_state(b6, (0, 0))
    out = (amp @ vac).coeffs
    # a_fwd kills the vacuum, a_bwd^dag creates (0,1)
    assert out[b6.index((0, 1))] == pytest.approx(1 / math.sqrt(2 * k), abs=1e-15)
    assert np.count_nonzero(out) == 1
    one = fock_state(b6, (1, 0))
    assert (amp @ one).coeffs[b6.index((0, 0))] == pytest.approx(1 / math.sqrt(2 * k), abs=1e-15)


def test_amplitude_from_transformed_ladders(b6):
    # A = (a_cos - i a_sin^dag ... ) reduces to (A_cos - i A_sin)/sqrt(2) in ladder form
    a_c = transformed_ladder(b6, "cos")
    a_s = transformed_ladder(b6, "sin")
    k = 1.0
    a_cos = (a_c + a_c.dag()) / math.sqrt(2 * k)
    a_sin = (a_s + a_s.dag()) / math.sqrt(2 * k)
    expected = (a_cos - a_sin * 1j) / math.sqrt(2)
    np.testing.assert_allclose(amplitude_operator(b6, k).matrix, expected.matrix, atol=1e-15)


def test_amplitude_rejects_bad_k(b6):
    with pytest.raises(ValueError):
        amplitude_operator(b6, 0.0)


def test_gram_is_hermitian_positive(b6):
    g = amplitude_gram(b6, 1.0).matrix
    np.testing.assert_allclose(g, g.conj().T, atol=1e-15)
    assert np.linalg.eigvalsh(g).min() > 1e-3


def test_gram_interior_matches_truncated_product(b6):
    amp = amplitude_operator(b6, 1.0)
    naive = (amp @ amp.dag()).matrix
    keep = b6.interior(1)
    np.testing.assert_allclose(
        amplitude_gram(b6, 1.0).matrix[np.ix_(keep, keep)], naive[np.ix_(keep, keep)], atol=1e-14
    )


# ---- herm_inv_sqrt

def test_inv_sqrt_identity():
    np.testing.assert_allclose(herm_inv_sqrt(np.eye(4)), np.eye(4), atol=1e-15)


def test_inv_sqrt_diagonal():
    np.testing.assert_allclose(herm_inv_sqrt(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]), atol=1e-15)


def test_inv_sqrt_random_hermitian():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    m = x @ x.conj().T + 0.5 * np.eye(8)
    r = herm_inv_sqrt(m)
    np.testing.assert_allclose(r @ m @ r, np.eye(8), atol=1e-10)
    np.testing.assert_allclose(r, r.conj().T, atol=1e-12)


def test_inv_sqrt_keeps_operator_type(b6):
    r = herm_inv_sqrt(amplitude_gram(b6))
    assert isinstance(r, ComplexOperator) and r.tag == b6.tag


def test_inv_sqrt_rejects_singular():
    with pytest.raises(NonPositiveSpectrum):
        herm_inv_sqrt(np.diag([1.0, 0.0]))
    with pytest.raises(NonPositiveSpectrum):
        herm_inv_sqrt(np.diag([1.0, -2.0]))
    with pytest.raises(NonPositiveSpectrum):
        herm_inv_sqrt(np.diag([1.0, 1e-14]))


def test_inv_sqrt_rel_floor_is_adjustable():
    r = herm_inv_sqrt(np.diag([1.0, 1e-14]), rel_floor=1e-15)
    assert r[1, 1] == pytest.approx(1e7)
    with pytest.raises(ValueError):
        herm_inv_sqrt(np.eye(2), rel_floor=0.0)


# ---- phase operator structure

def test_phase_operator_k_independent():
    basis = build_basis(12)
    np.testing.assert_allclose(
        phase_operator(basis, 1.0).matrix, phase_operator(basis, 2.5).matrix, atol=1e-10
    )


@pytest.mark.parametrize("n_max", [4, 11, 20])
def test_selection_rule(n_max, phase_at):
    basis, op = phase_at(n_max)
    assert selection_rule_violation(op, basis) < 1e-12


def test_selection_rule_examples(b6):
    assert selection_rule_violation(angular_momentum(b6), b6) == 6.0
    assert selection_rule_violation(amplitude_operator(b6), b6) == 0.0


def test_block_sparsity_maps_m_to_m_minus_one(phase_at):
    basis, op = phase_at(20)
    m = basis.m_values
    mat = np.abs(op.matrix)
    for col_m in np.unique(m):
        cols = m == col_m
        lands = np.unique(m[(mat[:, cols] > 1e-12).any(axis=1)])
        assert set(lands) <= {col_m - 1}


def test_lowers_angular_momentum(phase_at):
    basis, op = phase_at(20)
    lop = angular_momentum(basis)
    # [L, E] = -E exactly in the Fock basis
    np.testing.assert_allclose((lop @ op - op @ lop).matrix, -op.matrix, atol=1e-12)


# ---- forward restriction

def test_restrict_forward_example(phase_at):
    basis, op = phase_at(20)
    ep = restrict_forward(op, basis, 5)
    assert ep.tag == "forward:5" and ep.matrix.shape == (6, 6)
    assert ep[2, 3] == op[basis.index((2, 0)), basis.index((3, 0))]
    assert np.count_nonzero(ep.matrix - np.diag(np.diagonal(ep.matrix, 1), 1)) == 0


def test_restrict_forward_errors(phase_at):
    basis, op = phase_at(4)
    with pytest.raises(ValueError):
        restrict_forward(op, basis, 4)
    with pytest.raises(ValueError):
        restrict_forward(op, basis, 0)


def test_forward_elements_below_one(phase_at):
    basis, op = phase_at(30)
    a = np.diagonal(restrict_forward(op, basis, 15).matrix, 1)
    assert np.all(np.abs(a) < 1)


def test_forward_elements_converge(phase_at):
    a = phase_sequence_table(10)
    diffs = []
    for n_max in (20, 30, 40):
        basis, op = phase_at(n_max)
        got = np.diagonal(restrict_forward(op, basis, 10).matrix, 1).real
        diffs.append(np.abs(got - a))
    assert np.all(diffs[1] < diffs[0]) and np.all(diffs[2] < diffs[1])


def test_forward_elements_near_exact_at_40(phase_at):
    basis, op = phase_at(40)
    got = np.diagonal(restrict_forward(op, basis, 20).matrix, 1)
    assert np.abs(got - phase_sequence_table(20)).max() < FORWARD_ELEMENT_TOL


# ---- interior unitarity

def test_interior_unitarity_decreases(phase_at):
    vals = [interior_unitarity(phase_at(n)[1], phase_at(n)[0], n // 2) for n in (20, 30, 40)]
    assert vals[0] > vals[1] > vals[2]


@pytest.mark.parametrize("n_max", [20, 30, 40])
def test_interior_unitarity_floor(n_max, phase_at):
    # the m=0 block loses one dimension under E; its kernel vector is spread
    # uniformly, giving exactly 1/(n_max//2 + 1)
    basis, op = phase_at(n_max)
    assert interior_unitarity(op, basis, n_max // 2) == pytest.approx(1 / (n_max // 2 + 1), rel=1e-9)


@pytest.mark.parametrize("n_max", [20, 30, 40])
def test_unitary_on_positive_m_blocks(n_max, phase_at):
    # for m > 0 the target block m-1 is at least as large as block m, so no
    # kernel forms; all of the interior defect lives in m <= 0
    basis, op = phase_at(n_max)
    keep = basis.interior(n_max // 2) & (basis.m_values > 0)
    gram = (op.dag() @ op).matrix[np.ix_(keep, keep)]
    assert np.abs(gram - np.eye(int(keep.sum()))).max() < 1e-12


# ---- Susskind-Glogower

@pytest.mark.parametrize("n_keep", [1, 5, 17])
def test_sg_examples(n_keep):
    sg = sg_operator(n_keep)
    for n in range(n_keep):
        assert sg[n, n + 1] == 1
    vac = np.zeros(n_keep + 1)
    vac[0] = 1
    assert np.all(sg.matrix @ vac == 0)
    inner = (sg.dag() @ sg).matrix[:n_keep, :n_keep]
    expected = np.eye(n_keep)
    expected[0, 0] = 0
    np.testing.assert_array_equal(inner, expected)


def test_sg_rejects_zero():
    with pytest.raises(ValueError):
        sg_operator(0)


# ---- a_n

def exact_a(n, as_float=True):
    with mpmath.workdps(40):
        val = mpmath.gamma(n + mpmath.mpf(3) / 2) / (mpmath.factorial(n) * mpmath.sqrt(n + 1))
        return float(val) if as_float else val

def test_sequence_values():
    got = [round(phase_sequence(n), 4) for n in range(5)]
    assert got == [0.8862, 0.9400, 0.9594, 0.9693, 0.9754]
    assert phase_sequence(0) == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-15)


def test_sequence_matches_mpmath():
    for n in (0, 1, 7, 50, 171, 1000, 9999):
        assert abs(phase_sequence(n) - exact_a(n)) < 1e-15


def test_two_paths_agree():
    n = 10_001
    closed = phase_sequence_table(n)
    rec = phase_sequence_recurrence(n)
    assert np.abs(closed - rec).max() < 1e-13


def test_sequence_monotone_and_bounded():
    a = phase_sequence_table(10_001)
    assert np.all(np.diff(a) > 0)
    assert np.all(a < 1)


def test_sequence_asymptotic():
    for n in list(range(10, 60)) + [100, 1000, 10_000]:
        deficit = float(1 - exact_a(n, as_float=False))
        assert abs(deficit - 1 / (8 * (n + 1))) < 0.2 / (n + 1) ** 2
        assert abs((1 - phase_sequence(n)) - deficit) < 1e-15


def test_sequence_rejects_negative():
    with pytest.raises(ValueError):
        phase_sequence(-1)
    with pytest.raises(ValueError):
        phase_sequence_recurrence(-1)


def test_forward_phase_operator():
    ep = forward_phase_operator(4)
    assert ep.tag == "forward:4"
    np.testing.assert_array_equal(np.diagonal(ep.matrix, 1), phase_sequence_table(4))
    assert np.count_nonzero(ep.matrix) == 4
