"""Entropy and mutual-information primitives."""
import math

import numpy as np
import pytest

from icp_lab import (
    DensityOperator,
    Distribution,
    JointTable,
    binary_entropy,
    conditional_mutual_information,
    multivariate_mutual_information,
    mutual_information,
    shannon_entropy,
    von_neumann_entropy,
)


def test_binary_entropy_endpoints():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)


def test_binary_entropy_pinned_values():
    assert binary_entropy(0.3) == pytest.approx(0.8812908992306927, abs=1e-15)
    assert binary_entropy(0.650756) == pytest.approx(0.9333910704638491, abs=1e-15)
    # symmetry
    assert binary_entropy(0.3) == pytest.approx(binary_entropy(0.7), abs=1e-15)


def test_binary_entropy_rejects_out_of_range():
    with pytest.raises(ValueError):
        binary_entropy(-0.01)
    with pytest.raises(ValueError):
        binary_entropy(1.01)


def test_shannon_entropy_basic():
    assert shannon_entropy([0.5, 0.25, 0.25]) == pytest.approx(1.5, abs=1e-15)
    assert shannon_entropy([1.0, 0.0, 0.0]) == 0.0
    assert shannon_entropy(np.full(8, 1 / 8)) == pytest.approx(3.0, abs=1e-12)


def test_shannon_entropy_rejects_non_distribution():
    with pytest.raises(ValueError):
        shannon_entropy([0.5, 0.6])
    with pytest.raises(ValueError):
        shannon_entropy([0.5, -0.1, 0.6])


def test_distribution_entropy_matches_function():
    d = Distribution([0.2, 0.3, 0.5])
    assert d.entropy() == pytest.approx(shannon_entropy([0.2, 0.3, 0.5]), abs=1e-15)


def test_joint_table_marginals_and_entropy():
    p = np.array([[0.4, 0.1], [0.1, 0.4]])
    t = JointTable(("A", "B"), p)
    ma = t.marginal(["A"])
    assert np.allclose(ma.probs, [0.5, 0.5])
    assert t.entropy(["A"]) == pytest.approx(1.0, abs=1e-12)
    assert t.entropy() == pytest.approx(shannon_entropy(p.ravel()), abs=1e-15)


def test_joint_table_marginal_axis_order():
    p = np.array([[0.5, 0.0, 0.0], [0.0, 0.25, 0.25]])
    t = JointTable(("A", "B"), p)
    swapped = t.marginal(["B", "A"])
    assert swapped.register_names == ("B", "A")
    assert np.allclose(swapped.probs, p.T)


def test_joint_table_validation():
    with pytest.raises(ValueError):
        JointTable(("A",), np.array([[0.5, 0.5]]))  # rank mismatch
    with pytest.raises(ValueError):
        JointTable(("A", "A"), np.full((2, 2), 0.25))


def test_mutual_information_pinned():
    t = JointTable(("X", "Y"), np.array([[0.4, 0.1], [0.1, 0.4]]))
    assert mutual_information(t, "X", "Y") == pytest.approx(
        0.27807190511263774, abs=1e-15
    )


def test_mutual_information_independent_is_zero():
    t = JointTable(("X", "Y"), np.outer([0.3, 0.7], [0.6, 0.4]))
    assert abs(mutual_information(t, "X", "Y")) < 1e-12


def test_mutual_information_perfect_copy():
    t = JointTable(("X", "Y"), np.diag([0.5, 0.5]))
    assert mutual_information(t, "X", "Y") == pytest.approx(1.0, abs=1e-12)


def test_conditional_mi_chain_rule():
    rng = np.random.default_rng(7)
    p = rng.dirichlet(np.ones(8)).reshape(2, 2, 2)
    t = JointTable(("S", "A", "B"), p)
    lhs = mutual_information(
        JointTable(("S", "AB"), p.reshape(2, 4)), "S", "AB"
    )
    rhs = mutual_information(t.marginal(["S", "A"]), "S", "A") + (
        conditional_mutual_information(t, "S", "B", ["A"])
    )
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_multivariate_mi_copied_coin():
    # three perfect copies of a fair coin: sum H(single) - H(joint) = 3 - 1
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = p[1, 1, 1] = 0.5
    t = JointTable(("A", "B", "C"), p)
    assert multivariate_mutual_information(t) == pytest.approx(2.0, abs=1e-12)


def test_multivariate_mi_two_registers_reduces_to_mi():
    rng = np.random.default_rng(11)
    p = rng.dirichlet(np.ones(6)).reshape(2, 3)
    t = JointTable(("A", "B"), p)
    assert multivariate_mutual_information(t) == pytest.approx(
        mutual_information(t, "A", "B"), abs=1e-14
    )


def test_von_neumann_entropy_pure_and_mixed():
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)
    assert von_neumann_entropy(np.diag([0.8, 0.2])) == pytest.approx(
        0.7219280948873623, abs=1e-15
    )


def test_von_neumann_entropy_unitary_invariance():
    eigs = np.diag([0.8, 0.2]).astype(complex)
    theta = 0.7
    u = np.array(
        [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]],
        dtype=complex,
    )
    rotated = u @ eigs @ u.conj().T
    assert von_neumann_entropy(rotated) == pytest.approx(
        von_neumann_entropy(eigs), abs=1e-12
    )


def test_density_operator_validation():
    with pytest.raises(ValueError):
        DensityOperator(np.array([[0.5, 0.1], [0.4, 0.5]]))  # not hermitian
    with pytest.raises(ValueError):
        DensityOperator(np.diag([0.6, 0.6]))  # trace 1.2
    with pytest.raises(ValueError):
        DensityOperator(np.diag([1.5, -0.5]))  # negative eigenvalue
    ok = DensityOperator(np.eye(3) / 3)
    assert ok.dim == 3
