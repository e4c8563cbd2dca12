import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phaseid.errors import MalformedMatrix
from phaseid.topology import (
    Phase,
    PhaseAssignment,
    assignment_to_matrix,
    incidence_parent_block,
    matrix_to_assignment,
)

assignments = st.lists(st.sampled_from(list(Phase)), min_size=0, max_size=40).map(PhaseAssignment.from_sequence)


def test_assignment_to_matrix_examples():
    a = PhaseAssignment.from_mapping({0: "A", 1: "A", 2: "C"})
    np.testing.assert_array_equal(assignment_to_matrix(a), [[1, 1, 0], [0, 0, 0], [0, 0, 1]])
    np.testing.assert_array_equal(assignment_to_matrix(PhaseAssignment(("A", "B", "C"))), np.eye(3))
    all_b = assignment_to_matrix(PhaseAssignment(("B",) * 5))
    np.testing.assert_array_equal(all_b, [[0] * 5, [1] * 5, [0] * 5])


def test_matrix_to_assignment_examples():
    assert matrix_to_assignment(np.eye(3, dtype=int)) == PhaseAssignment((Phase.A, Phase.B, Phase.C))
    assert matrix_to_assignment([[1, 1, 0], [0, 0, 0], [0, 0, 1]]).phases == (Phase.A, Phase.A, Phase.C)


@pytest.mark.parametrize(
    "bad",
    [
        [[1, 1], [1, 0], [0, 0]],  # column 0 sums to 2
        [[0, 1], [0, 0], [0, 0]],  # column 0 sums to 0
        [[2, 1], [-1, 0], [0, 0]],  # entries outside {0, 1}
        [[0.5, 1], [0.5, 0], [0, 0]],
        [[1, 0], [0, 1]],  # wrong row count
    ],
)
def test_malformed_matrix(bad):
    with pytest.raises(MalformedMatrix):
        matrix_to_assignment(bad)


def test_parent_block_is_negated_connectivity():
    a = PhaseAssignment(("C", "A", "A", "B"))
    block = incidence_parent_block(a)
    assert set(np.unique(block)) <= {-1, 0}
    assert (block.sum(axis=0) == -1).all()
    np.testing.assert_array_equal(-block, assignment_to_matrix(a))


@settings(max_examples=300)
@given(assignments)
def test_round_trip(a):
    m = assignment_to_matrix(a)
    assert (m.sum(axis=0) == 1).all()
    assert matrix_to_assignment(m) == a
    np.testing.assert_array_equal(assignment_to_matrix(matrix_to_assignment(m)), m)


@settings(max_examples=200)
@given(assignments, st.randoms(use_true_random=False))
def test_permutation_equivariance(a, rnd):
    order = list(range(a.n_i))
    rnd.shuffle(order)
    np.testing.assert_array_equal(assignment_to_matrix(a.permuted(order)), assignment_to_matrix(a)[:, order])


def test_phase_parse():
    assert Phase.parse("b") is Phase.B
    assert Phase.parse(2) is Phase.C
    assert Phase.A < Phase.B < Phase.C
    with pytest.raises(ValueError):
        Phase.parse("D")


def test_from_mapping_requires_dense_indices():
    with pytest.raises(ValueError):
        PhaseAssignment.from_mapping({0: "A", 2: "B"})
