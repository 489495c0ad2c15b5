import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from doubletrine.ensembles import double_trine, trine_states
from doubletrine.errors import DimensionError, IncompletePovmError, InvalidPovmError, NormalizationError
from doubletrine.linalg import SIGMA_X, SIGMA_Z, inner, normalize, projector, tensor
from doubletrine.measurements import (
    PovmClass,
    check_povm,
    classify_povm,
    concurrence,
    concurrence_signed,
    cyclic_unitary,
    entangled_basis_povm,
    entangled_basis_states,
    make_povm,
    nine_outcome_product_povm,
    povm_from_dict,
    povm_to_dict,
    rotated_product_states,
    rotation,
    single_qubit_trine_povm,
    singlet,
    singlet_superposition_states,
    six_outcome_elements,
    six_outcome_unentangled_povm,
    solve_completeness_constraint,
    solve_separability_constraint,
)

from conftest import assert_close

R2, R3 = np.sqrt(2), np.sqrt(3)
A0 = np.array([1 + R2, 0, 0, 1 - R2]) / np.sqrt(6)
B0 = np.array([1 + R2, -1, 1, 1 - R2]) / (2 * R2)
C0 = np.array([1 + R2, 1, -1, 1 - R2]) / (2 * R2)


def defect_formula(theta, alpha):
    xx_zz = np.kron(SIGMA_X, SIGMA_X) + np.kron(SIGMA_Z, SIGMA_Z)
    return alpha * 1.5 * (np.eye(4) + 0.5 * np.cos(2 * theta) * xx_zz) - np.eye(4)


class TestEntangledBasis:
    def test_explicit_a0(self):
        assert_close(entangled_basis_states()[0], A0, 1e-15)

    def test_orthonormal(self):
        v = np.array(entangled_basis_states())
        assert_close(v.conj() @ v.T, np.eye(4), 1e-15)

    def test_overlap_with_ensemble(self):
        a = double_trine().states
        big_a = entangled_basis_states()
        assert abs(inner(a[0], big_a[0])) ** 2 == pytest.approx(0.5 + R2 / 3, abs=1e-15)
        assert 0.5 + R2 / 3 == pytest.approx(0.971, abs=5e-4)

    def test_povm_labels(self):
        p = entangled_basis_povm()
        assert p.labels == ("A0", "A1", "A2", "S") and p.M == 4 and p.dim == 4


class TestTrinePovms:
    def test_single_qubit_probabilities(self):
        psi = trine_states()
        pi = single_qubit_trine_povm().elements
        for j in range(3):
            assert inner(psi[j], pi[j] @ psi[j]).real == pytest.approx(0, abs=1e-15)
            assert inner(psi[j], pi[(j + 1) % 3] @ psi[j]).real == pytest.approx(0.5, abs=1e-15)
            assert inner(psi[j], pi[(j + 2) % 3] @ psi[j]).real == pytest.approx(0.5, abs=1e-15)
        assert_close(sum(pi), np.eye(2), 1e-15)

    def test_nine_outcome(self):
        p = nine_outcome_product_povm()
        assert p.M == 9
        a = double_trine().states
        e01 = p.elements[p.labels.index("P0xP1")]
        assert inner(a[2], e01 @ a[2]).real == pytest.approx(0.25, abs=1e-15)
        for j in (0, 1):
            assert inner(a[j], e01 @ a[j]).real == pytest.approx(0, abs=1e-15)
        assert classify_povm(p) is PovmClass.UNENTANGLED


class TestRotation:
    def test_identity(self):
        assert_close(rotation(0), np.eye(2), 0)

    def test_unitary(self):
        r = rotation(0.7)
        assert_close(r @ r.conj().T, np.eye(2), 1e-15)

    def test_overlap_cos2_pi8(self):
        psi0 = trine_states()[0]
        r = rotation(np.pi / 4)
        for phi in (r @ psi0, np.linalg.inv(r) @ psi0):
            assert abs(inner(psi0, phi)) ** 2 == pytest.approx(np.cos(np.pi / 8) ** 2, abs=1e-15)

    def test_explicit_b0_c0(self):
        b, c = rotated_product_states(np.pi / 4)
        assert_close(b[0], B0, 1e-15)
        assert_close(c[0], C0, 1e-15)


class TestSixOutcome:
    def test_valid_at_45_degrees(self):
        p = six_outcome_unentangled_povm(np.pi / 4, 2 / 3)
        assert p.M == 6
        assert classify_povm(p) is PovmClass.UNENTANGLED

    def test_valid_at_135_degrees(self):
        assert six_outcome_unentangled_povm(3 * np.pi / 4, 2 / 3).M == 6

    def test_e0_probability(self):
        a0 = double_trine().states[0]
        e0 = six_outcome_unentangled_povm().elements[0]
        val = inner(a0, e0 @ a0).real
        assert val == pytest.approx(0.25 + R2 / 6, abs=1e-15)
        assert val == pytest.approx(2 / 3 * np.cos(np.pi / 8) ** 4, abs=1e-15)
        assert round(val, 3) == 0.486

    @pytest.mark.parametrize("theta, alpha", [(np.pi / 3, 4 / 9), (np.pi / 4, 0.5), (0.3, 2 / 3)])
    def test_incomplete_choice_reports_defect(self, theta, alpha):
        with pytest.raises(IncompletePovmError) as err:
            six_outcome_unentangled_povm(theta, alpha)
        assert np.linalg.norm(err.value.defect) > 1e-3
        assert_close(err.value.defect, defect_formula(theta, alpha), 1e-10)

    def test_sixty_degrees_matches_bad_set(self):
        # at 60 degrees the elements are the pairwise products Π_j ⊗ Π_k, j != k
        pi = single_qubit_trine_povm().elements
        elems = six_outcome_elements(np.pi / 3, 4 / 9)
        assert_close(elems[0], np.kron(pi[2], pi[1]), 1e-15)

    @given(st.floats(-np.pi, np.pi), st.floats(0.01, 2))
    def test_defect_formula(self, theta, alpha):
        total = sum(six_outcome_elements(theta, alpha))
        assert np.linalg.norm(total - np.eye(4) - defect_formula(theta, alpha)) <= 1e-10


class TestConcurrence:
    def test_signed_examples(self):
        assert concurrence_signed(singlet()) == pytest.approx(-1, abs=1e-15)
        assert concurrence_signed(A0) == pytest.approx(1 / 3, abs=1e-15)
        assert concurrence_signed(B0) == pytest.approx(0, abs=1e-15)
        assert concurrence_signed(C0) == pytest.approx(0, abs=1e-15)

    def test_unsigned_examples(self):
        psi = trine_states()
        assert concurrence(tensor(psi[1], psi[2])) == pytest.approx(0, abs=1e-15)
        assert concurrence(singlet()) == pytest.approx(1, abs=1e-15)
        for a in entangled_basis_states()[:3]:
            assert concurrence(a) == pytest.approx(1 / 3, abs=1e-12)

    def test_dimension(self):
        with pytest.raises(DimensionError):
            concurrence(trine_states()[0])

    def test_complex_product_state(self):
        v = tensor(normalize([1, 1j]), normalize([2, 1 - 1j]))
        assert concurrence(v) == pytest.approx(0, abs=1e-15)

    @given(arrays(np.float64, 4, elements=st.floats(-1, 1)).filter(lambda x: np.linalg.norm(x) > 1e-2))
    def test_invariant_under_cyclic_unitary(self, x):
        v = normalize(x)
        _, big_u = cyclic_unitary()
        assert concurrence(big_u @ v) == pytest.approx(concurrence(v), abs=1e-12)


class TestSingletSuperposition:
    def test_recovers_b_and_c(self):
        states = singlet_superposition_states(R3 / 2, 0.5)
        b, c = rotated_product_states(np.pi / 4)
        for j in range(3):
            assert_close(states[j], b[j], 1e-12)
            assert_close(states[3 + j], c[j], 1e-12)

    def test_trivial_weights(self):
        states = singlet_superposition_states(1.0, 0.0)
        a = entangled_basis_states()
        for j in range(3):
            assert_close(states[j], a[j], 0)

    def test_unnormalized(self):
        with pytest.raises(NormalizationError):
            singlet_superposition_states(1.0, 1.0)

    def test_signed_concurrence_formula(self, rng):
        a0, s = entangled_basis_states()[0], singlet()
        for t in rng.uniform(0, 2 * np.pi, 50):
            beta, gamma = np.cos(t), np.sin(t)
            assert concurrence_signed(beta * a0 + gamma * s) == pytest.approx(
                beta**2 / 3 - gamma**2, abs=1e-12
            )


class TestConstraintSolvers:
    def test_separability(self):
        beta, gamma = solve_separability_constraint()
        assert beta == pytest.approx(R3 / 2, abs=1e-12)
        assert gamma == pytest.approx(0.5, abs=1e-12)
        for v in singlet_superposition_states(beta, gamma):
            assert concurrence(v) <= 1e-12

    def test_completeness(self):
        b2, g2 = solve_completeness_constraint()
        assert b2 == pytest.approx(0.75, abs=1e-12)
        assert g2 == pytest.approx(0.25, abs=1e-12)

    def test_agree(self):
        beta, gamma = solve_separability_constraint()
        b2, g2 = solve_completeness_constraint()
        assert beta**2 == pytest.approx(b2, abs=1e-12)
        assert gamma**2 == pytest.approx(g2, abs=1e-12)

    def test_resulting_set_is_povm(self):
        beta, gamma = solve_separability_constraint()
        p = make_povm([2 / 3 * projector(v) for v in singlet_superposition_states(beta, gamma)])
        assert classify_povm(p) is PovmClass.UNENTANGLED


class TestCyclicUnitary:
    def test_cycles(self):
        u, big_u = cyclic_unitary()
        psi = trine_states()
        a = entangled_basis_states()
        b, c = rotated_product_states(np.pi / 4)
        for j in range(3):
            assert_close(u @ psi[j], psi[(j + 1) % 3], 1e-15)
            assert_close(big_u @ a[j], a[(j + 1) % 3], 1e-10)
            assert_close(big_u @ b[j], b[(j + 1) % 3], 1e-10)
            assert_close(big_u @ c[j], c[(j + 1) % 3], 1e-10)
        assert_close(big_u @ singlet(), singlet(), 1e-10)
        assert_close(np.linalg.matrix_power(big_u, 3), np.eye(4), 1e-10)


class TestValidation:
    @pytest.mark.parametrize(
        "factory",
        [entangled_basis_povm, single_qubit_trine_povm, nine_outcome_product_povm, six_outcome_unentangled_povm],
    )
    def test_constructors_pass(self, factory):
        rep = check_povm(factory().elements)
        assert rep.valid and rep.defect_norm <= 1e-10
        assert min(rep.min_eigenvalues) >= -1e-10

    def test_empty(self):
        assert not check_povm([]).valid
        with pytest.raises(InvalidPovmError):
            make_povm([])

    def test_negative_element(self):
        with pytest.raises(InvalidPovmError) as err:
            make_povm([np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])])
        assert not isinstance(err.value, IncompletePovmError)

    def test_non_hermitian(self):
        with pytest.raises(InvalidPovmError):
            make_povm([np.array([[1, 1], [0, 1]])])


class TestClassify:
    def test_entangled(self):
        assert classify_povm(entangled_basis_povm()) is PovmClass.ENTANGLED

    def test_indeterminate(self):
        p = make_povm([np.diag([1, 1, 0, 0]), np.diag([0, 0, 1, 1])])
        assert classify_povm(p) is PovmClass.INDETERMINATE

    def test_requires_two_qubits(self):
        with pytest.raises(DimensionError):
            classify_povm(single_qubit_trine_povm())


def test_json_round_trip():
    p = six_outcome_unentangled_povm()
    text = json.dumps(povm_to_dict(p))
    back = povm_from_dict(json.loads(text))
    assert back.labels == p.labels
    assert json.dumps(povm_to_dict(back)) == text
