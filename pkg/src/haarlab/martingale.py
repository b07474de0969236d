"""Step functions, conditional expectations, and the measure-adapted Haar basis.

Analysis and synthesis run in O(2**depth) per call via heap aggregation;
no dense inner products are formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .measure import MeasureTree
from .tree import DyadicTree, Node, TreeError, aggregate_heap, leaf_broadcast


@dataclass(frozen=True)
class StepFunction:
    """A real function constant on each leaf interval of a depth-D tree."""

    depth: int
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (1 << self.depth,):
            raise TreeError(
                f"expected {1 << self.depth} leaf values, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return StepFunction(self.depth, self.values + other.values)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return StepFunction(self.depth, self.values - other.values)

    def __mul__(self, scalar: float) -> "StepFunction":
        return StepFunction(self.depth, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "StepFunction":
        return StepFunction(self.depth, -self.values)

    def __abs__(self) -> "StepFunction":
        return StepFunction(self.depth, np.abs(self.values))

    def restrict(self, tree: DyadicTree, node: Node) -> "StepFunction":
        """Zero out everything outside the given node."""
        lo, hi = tree.leaf_range(node)
        vals = np.zeros_like(self.values)
        vals[lo:hi] = self.values[lo:hi]
        return StepFunction(self.depth, vals)

    @staticmethod
    def zero(depth: int) -> "StepFunction":
        return StepFunction(depth, np.zeros(1 << depth))

    @staticmethod
    def constant(depth: int, c: float) -> "StepFunction":
        return StepFunction(depth, np.full(1 << depth, float(c)))

    @staticmethod
    def indicator(tree: DyadicTree, node: Node) -> "StepFunction":
        lo, hi = tree.leaf_range(node)
        vals = np.zeros(tree.n_leaves)
        vals[lo:hi] = 1.0
        return StepFunction(tree.depth, vals)


@dataclass
class HaarSpectrum:
    """Mean plus one coefficient per internal node, heap-indexed.

    coeffs has length 2**depth with slot 0 unused; coeffs[heap(I)] is the
    inner product of the analyzed function with h_I.
    """

    depth: int
    mean: float
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=np.float64)
        if c.shape != (1 << self.depth,):
            raise TreeError(f"expected coeff heap of {1 << self.depth}, got {c.shape}")
        self.coeffs = c

    def coeff(self, node: Node) -> float:
        k, j = node
        if k >= self.depth:
            raise TreeError(f"no Haar coefficient at leaf level for {node}")
        return float(self.coeffs[(1 << k) + j])

    def items(self):
        for p in range(1, 1 << self.depth):
            level = p.bit_length() - 1
            yield Node(level, p - (1 << level)), float(self.coeffs[p])

    @staticmethod
    def zero(depth: int) -> "HaarSpectrum":
        return HaarSpectrum(depth, 0.0, np.zeros(1 << depth))


def _check_compat(f: StepFunction, mu: MeasureTree) -> None:
    if f.depth != mu.depth:
        raise TreeError(f"function depth {f.depth} != measure depth {mu.depth}")


def integral_heap(f: StepFunction, mu: MeasureTree) -> np.ndarray:
    """Heap of integrals of f over every node."""
    _check_compat(f, mu)
    return aggregate_heap(mu.depth, f.values * mu.leaf_masses)


def average_heap(f: StepFunction, mu: MeasureTree) -> np.ndarray:
    """Heap of averages of f over every node."""
    ints = integral_heap(f, mu)
    out = np.empty_like(ints)
    out[0] = np.nan
    out[1:] = ints[1:] / mu.mass_heap[1:]
    return out


def average(f: StepFunction, mu: MeasureTree, node: Node) -> float:
    _check_compat(f, mu)
    lo, hi = mu.tree.leaf_range(node)
    return float(
        np.dot(f.values[lo:hi], mu.leaf_masses[lo:hi]) / mu.mass_heap[mu.tree.heap(node)]
    )


def expectation(f: StepFunction, mu: MeasureTree, k: int) -> StepFunction:
    """Conditional expectation onto generation k; k = -1 is the root average."""
    _check_compat(f, mu)
    if not (-1 <= k <= mu.depth):
        raise TreeError(f"generation {k} out of range [-1, {mu.depth}]")
    if k == mu.depth:
        return StepFunction(f.depth, f.values.copy())
    avg = average_heap(f, mu)
    level = max(k, 0)  # E_{-1} equals E_0: a single node at level 0
    lo, hi = 1 << level, 1 << (level + 1)
    return StepFunction(f.depth, leaf_broadcast(mu.depth, avg[lo:hi], level))


def difference(f: StepFunction, mu: MeasureTree, k: int) -> StepFunction:
    """Martingale difference E_k f - E_{k-1} f."""
    if not (0 <= k <= mu.depth):
        raise TreeError(f"difference index {k} out of range [0, {mu.depth}]")
    return expectation(f, mu, k) - expectation(f, mu, k - 1)


def haar_constant(mu: MeasureTree, node: Node) -> float:
    """c_I = sqrt(mu(I-) mu(I+) / mu(I))."""
    if mu.tree.is_leaf(node):
        raise TreeError(f"no Haar function at leaf {node}")
    p = mu.tree.heap(node)
    return float(
        np.sqrt(mu.mass_heap[2 * p] * mu.mass_heap[2 * p + 1] / mu.mass_heap[p])
    )


def haar_function(mu: MeasureTree, node: Node) -> StepFunction:
    """The L2(mu)-normalized, mean-zero function constant on the children of node."""
    if mu.tree.is_leaf(node):
        raise TreeError(f"no Haar function at leaf {node}")
    c = haar_constant(mu, node)
    left, right = mu.tree.children(node)
    vals = np.zeros(mu.tree.n_leaves)
    llo, lhi = mu.tree.leaf_range(left)
    rlo, rhi = mu.tree.leaf_range(right)
    vals[llo:lhi] = c / mu.mass_heap[mu.tree.heap(left)]
    vals[rlo:rhi] = -c / mu.mass_heap[mu.tree.heap(right)]
    return StepFunction(mu.depth, vals)


def haar_l1_norm(mu: MeasureTree, node: Node) -> float:
    """Closed form: ||h_I||_L1 = 2 c_I."""
    return 2.0 * haar_constant(mu, node)


def haar_linf_norm(mu: MeasureTree, node: Node) -> float:
    """Closed form: ||h_I||_Linf = c_I / m(I)."""
    return haar_constant(mu, node) / mu.min_child_mass(node)


def analyze(f: StepFunction, mu: MeasureTree) -> HaarSpectrum:
    """Haar coefficients of f: coeff(I) = c_I (<f>_{I-} - <f>_{I+})."""
    _check_compat(f, mu)
    n = 1 << mu.depth
    avg = average_heap(f, mu)
    c = mu.haar_constant_heap()
    coeffs = np.empty(n, dtype=np.float64)
    coeffs[0] = np.nan
    coeffs[1:] = c[1:] * (avg[2 : 2 * n : 2] - avg[3 : 2 * n : 2])
    coeffs[0] = 0.0
    return HaarSpectrum(mu.depth, float(avg[1]), coeffs)


def synthesize(spec: HaarSpectrum, mu: MeasureTree) -> StepFunction:
    """Inverse transform: mean + sum of coeff(I) h_I, computed top-down."""
    if spec.depth != mu.depth:
        raise TreeError(f"spectrum depth {spec.depth} != measure depth {mu.depth}")
    n = 1 << mu.depth
    acc = np.empty(2 * n, dtype=np.float64)
    acc[1] = spec.mean
    c = mu.haar_constant_heap()
    for k in range(mu.depth):
        lo, hi = 1 << k, 1 << (k + 1)
        step = spec.coeffs[lo:hi] * c[lo:hi]
        acc[2 * lo : 2 * hi : 2] = acc[lo:hi] + step / mu.mass_heap[2 * lo : 2 * hi : 2]
        acc[2 * lo + 1 : 2 * hi : 2] = (
            acc[lo:hi] - step / mu.mass_heap[2 * lo + 1 : 2 * hi : 2]
        )
    return StepFunction(mu.depth, acc[n:])


def square_function(f: StepFunction, mu: MeasureTree) -> StepFunction:
    """Pointwise (sum_I coeff(I)^2 h_I(x)^2)^(1/2), accumulated top-down."""
    spec = analyze(f, mu)
    return square_function_of_spectrum(spec, mu)


def square_function_of_spectrum(spec: HaarSpectrum, mu: MeasureTree) -> StepFunction:
    if spec.depth != mu.depth:
        raise TreeError(f"spectrum depth {spec.depth} != measure depth {mu.depth}")
    n = 1 << mu.depth
    acc = np.zeros(2 * n, dtype=np.float64)
    c = mu.haar_constant_heap()
    for k in range(mu.depth):
        lo, hi = 1 << k, 1 << (k + 1)
        step = spec.coeffs[lo:hi] * c[lo:hi]
        acc[2 * lo : 2 * hi : 2] = (
            acc[lo:hi] + (step / mu.mass_heap[2 * lo : 2 * hi : 2]) ** 2
        )
        acc[2 * lo + 1 : 2 * hi : 2] = (
            acc[lo:hi] + (step / mu.mass_heap[2 * lo + 1 : 2 * hi : 2]) ** 2
        )
    return StepFunction(mu.depth, np.sqrt(acc[n:]))


def haar_basis_matrix(mu: MeasureTree) -> np.ndarray:
    """Dense matrix of all Haar functions: row heap(I) - 1 holds the leaf
    values of h_I.  Intended for small depths (Gram-matrix checks)."""
    n = 1 << mu.depth
    tree = mu.tree
    out = np.zeros((n - 1, n))
    c = mu.haar_constant_heap()
    for p in range(1, n):
        node = tree.node_at(p)
        left, right = tree.children(node)
        llo, lhi = tree.leaf_range(left)
        rlo, rhi = tree.leaf_range(right)
        out[p - 1, llo:lhi] = c[p] / mu.mass_heap[2 * p]
        out[p - 1, rlo:rhi] = -c[p] / mu.mass_heap[2 * p + 1]
    return out


def square_function_martingale(f: StepFunction, mu: MeasureTree) -> StepFunction:
    """Independent martingale form: (sum_k |E_k f - E_{k-1} f|^2)^(1/2)."""
    _check_compat(f, mu)
    acc = np.zeros(1 << mu.depth)
    prev = expectation(f, mu, 0).values
    for k in range(1, mu.depth + 1):
        cur = expectation(f, mu, k).values
        acc += (cur - prev) ** 2
        prev = cur
    return StepFunction(mu.depth, np.sqrt(acc))
