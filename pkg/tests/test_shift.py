"""Shift construction, validation, application, adjoints, and matrices."""

import numpy as np
import pytest

from haarlab.martingale import StepFunction, analyze, haar_function
from haarlab.measure import random_doubling
from haarlab.norms import inner_product, lp_norm
from haarlab.shift import (
    CanonicalShift,
    GeneralShift,
    ShiftError,
    ShiftShape,
    apply_shift,
    dense_alphas,
    haar_matrix,
    petermichl,
)
from haarlab.tree import Node, TreeError


@pytest.fixture
def mu():
    return random_doubling(4, seed=13, p_min=0.1, p_max=0.9)


def test_shape_validation():
    with pytest.raises(ShiftError):
        ShiftShape(-1, 0)
    assert ShiftShape(2, 1).r == 2


def test_term_membership_validation():
    with pytest.raises(ShiftError):
        # R is not a depth-1 descendant of Q
        GeneralShift(3, ShiftShape(1, 0), [(Node(0, 0), Node(2, 0), Node(0, 0), 1.0)])
    with pytest.raises(ShiftError):
        # alpha out of range
        GeneralShift(3, ShiftShape(0, 0), [(Node(0, 0), Node(0, 0), Node(0, 0), 2.0)])
    with pytest.raises(ShiftError):
        GeneralShift(0, ShiftShape(0, 0), [])


def test_leaf_level_terms_dropped():
    T = GeneralShift(
        2,
        ShiftShape(0, 1),
        [
            (Node(0, 0), Node(0, 0), Node(1, 0), 1.0),
            (Node(1, 0), Node(1, 0), Node(2, 0), 1.0),  # output at leaf level
        ],
    )
    assert len(T.terms) == 1
    assert T.dropped == 1


def test_petermichl_action_on_haar(mu):
    T = petermichl(mu.depth)
    for node in [Node(0, 0), Node(1, 1), Node(2, 2)]:
        h = haar_function(mu, node)
        th = apply_shift(T, h, mu)
        left, right = mu.tree.children(node)
        expected = haar_function(mu, left) - haar_function(mu, right)
        assert np.max(np.abs(th.values - expected.values)) < 1e-10


def test_petermichl_top_level_haar_maps_to_zero(mu):
    # Haar functions one level above the leaves have leaf-level children
    T = petermichl(mu.depth)
    h = haar_function(mu, Node(mu.depth - 1, 0))
    th = apply_shift(T, h, mu)
    assert np.max(np.abs(th.values)) < 1e-12


def test_apply_is_linear(mu):
    T = petermichl(mu.depth)
    rng = np.random.default_rng(0)
    f = StepFunction(mu.depth, rng.standard_normal(16))
    g = StepFunction(mu.depth, rng.standard_normal(16))
    lhs = apply_shift(T, 2.0 * f + g, mu)
    rhs = 2.0 * apply_shift(T, f, mu) + apply_shift(T, g, mu)
    assert np.max(np.abs(lhs.values - rhs.values)) < 1e-10


def test_adjoint_pairing(mu):
    T = petermichl(mu.depth)
    Tadj = T.adjoint()
    assert Tadj.shape == ShiftShape(1, 0)
    rng = np.random.default_rng(1)
    f = StepFunction(mu.depth, rng.standard_normal(16))
    g = StepFunction(mu.depth, rng.standard_normal(16))
    lhs = inner_product(apply_shift(T, f, mu), g, mu)
    rhs = inner_product(f, apply_shift(Tadj, g, mu), mu)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_canonical_matches_general(mu):
    T = CanonicalShift(mu.depth, 1, 0, 1, 1, dense_alphas(mu.depth, 1, 1, -1.0))
    G = T.to_general()
    assert G is T.to_general()  # cached
    rng = np.random.default_rng(2)
    f = StepFunction(mu.depth, rng.standard_normal(16))
    a = apply_shift(T, f, mu)
    b = apply_shift(G, f, mu)
    assert np.array_equal(a.values, b.values)


def test_canonical_validation():
    with pytest.raises(ShiftError):
        CanonicalShift(4, -1, 0, 0, 0, {})
    with pytest.raises(ShiftError):
        CanonicalShift(4, 1, 2, 0, 0, {})  # selector out of range
    with pytest.raises(ShiftError):
        CanonicalShift(4, 0, 0, 0, 0, {Node(0, 0): 1.5})
    with pytest.raises(TreeError):
        CanonicalShift(4, 0, 0, 0, 0, {Node(5, 0): 1.0})


def test_dense_alphas_respects_cutoff():
    alphas = dense_alphas(4, 1, 2, 1.0)
    # max(m, n) = 2, so nodes above level 4 - 1 - 2 = 1 are excluded
    assert max(node.level for node in alphas) == 1
    assert all(a == 1.0 for a in alphas.values())


def test_haar_matrix_matches_terms(mu):
    T = petermichl(mu.depth)
    mat = haar_matrix(T, mu).toarray()
    tree = mu.tree
    for q, r, s, alpha in T.terms:
        assert mat[tree.heap(s) - 1, tree.heap(r) - 1] == alpha
    assert np.sum(mat != 0) == len(T.terms)
    with pytest.raises(ShiftError):
        haar_matrix(T, random_doubling(3, seed=0))


def test_shift_acts_diagonally_in_haar_domain(mu):
    """Coefficient shuffling: output coefficient at S is alpha times the
    input coefficient at R, summed over terms."""
    T = petermichl(mu.depth)
    rng = np.random.default_rng(3)
    f = StepFunction(mu.depth, rng.standard_normal(16))
    spec = analyze(f, mu)
    out = T.apply_spectrum(spec)
    mat = haar_matrix(T).toarray()
    expected = mat @ spec.coeffs[1:]
    assert np.max(np.abs(out.coeffs[1:] - expected)) < 1e-12
    assert out.mean == 0.0


def test_spectrum_depth_mismatch(mu):
    T = petermichl(3)
    f = StepFunction(mu.depth, np.ones(16))
    with pytest.raises(ShiftError):
        T.apply_spectrum(analyze(f, mu))
