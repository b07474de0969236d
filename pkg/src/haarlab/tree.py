"""Finite dyadic trees: (level, index) node addressing and navigation.

Nodes are addressed heap-style: the node (k, j) lives at heap position
2**k + j, so the root is position 1 and the leaves of a depth-D tree
occupy positions 2**D .. 2**(D+1) - 1.  All per-node arrays in this
package are heap-indexed with slot 0 unused.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np


class TreeError(ValueError):
    """Invalid node address or navigation past the tree boundary."""


class Node(NamedTuple):
    level: int
    index: int

    def __str__(self) -> str:
        return f"{self.level},{self.index}"


def node_from_key(key: str) -> Node:
    """Parse the 'level,index' serialization of a node."""
    try:
        k, j = key.split(",")
        return Node(int(k), int(j))
    except Exception as exc:
        raise TreeError(f"bad node key {key!r}") from exc


@dataclass(frozen=True)
class DyadicTree:
    """A rooted binary tree of dyadic intervals of a fixed finite depth.

    The geometry (root_origin, root_length) is carried only for
    human-readable reporting; nothing quantitative depends on it.
    """

    depth: int
    root_origin: float = 0.0
    root_length: float = 1.0

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise TreeError(f"depth must be >= 1, got {self.depth}")
        if not self.root_length > 0:
            raise TreeError(f"root_length must be > 0, got {self.root_length}")

    @property
    def n_leaves(self) -> int:
        return 1 << self.depth

    @property
    def n_nodes(self) -> int:
        return (1 << (self.depth + 1)) - 1

    @property
    def n_internal(self) -> int:
        return (1 << self.depth) - 1

    def check(self, node: Node) -> Node:
        k, j = node
        if not (0 <= k <= self.depth) or not (0 <= j < (1 << k)):
            raise TreeError(f"node {node} outside tree of depth {self.depth}")
        return Node(k, j)

    def heap(self, node: Node) -> int:
        self.check(node)
        return (1 << node.level) + node.index

    def node_at(self, pos: int) -> Node:
        if not (1 <= pos < (1 << (self.depth + 1))):
            raise TreeError(f"heap position {pos} outside tree")
        level = pos.bit_length() - 1
        return Node(level, pos - (1 << level))

    def is_leaf(self, node: Node) -> bool:
        return self.check(node).level == self.depth

    def parent(self, node: Node) -> Node:
        k, j = self.check(node)
        if k == 0:
            raise TreeError("root has no parent")
        return Node(k - 1, j // 2)

    def children(self, node: Node) -> tuple[Node, Node]:
        k, j = self.check(node)
        if k == self.depth:
            raise TreeError(f"leaf {node} has no children")
        return Node(k + 1, 2 * j), Node(k + 1, 2 * j + 1)

    def descendants(self, node: Node, r: int) -> list[Node]:
        """The 2**r nodes r levels below, left to right."""
        k, j = self.check(node)
        if r < 0:
            raise TreeError(f"descendant depth must be >= 0, got {r}")
        if k + r > self.depth:
            raise TreeError(f"descendants({node}, {r}) exceed depth {self.depth}")
        return [Node(k + r, (j << r) + s) for s in range(1 << r)]

    def descendant(self, node: Node, r: int, s: int) -> Node:
        """Selector: the s-th (left-to-right) node r levels below."""
        if not (0 <= s < (1 << r)):
            raise TreeError(f"selector {s} out of range for depth offset {r}")
        k, j = self.check(node)
        if k + r > self.depth:
            raise TreeError(f"descendant({node}, {r}) exceeds depth {self.depth}")
        return Node(k + r, (j << r) + s)

    def ancestor(self, node: Node, t: int) -> Node:
        k, j = self.check(node)
        if t < 0:
            raise TreeError(f"ancestor height must be >= 0, got {t}")
        if k - t < 0:
            raise TreeError(f"ancestor({node}, {t}) lies above the root")
        return Node(k - t, j >> t)

    def leaf_range(self, node: Node) -> tuple[int, int]:
        """Half-open range of leaf indices under the node."""
        k, j = self.check(node)
        width = 1 << (self.depth - k)
        return j * width, (j + 1) * width

    def nodes(self) -> Iterator[Node]:
        for k in range(self.depth + 1):
            for j in range(1 << k):
                yield Node(k, j)

    def internal_nodes(self) -> Iterator[Node]:
        for k in range(self.depth):
            for j in range(1 << k):
                yield Node(k, j)

    def leaves(self) -> Iterator[Node]:
        for j in range(self.n_leaves):
            yield Node(self.depth, j)

    def interval(self, node: Node) -> tuple[float, float]:
        """(origin, length) of the node's interval, reporting only."""
        k, j = self.check(node)
        length = self.root_length / (1 << k)
        return self.root_origin + j * length, length


def aggregate_heap(depth: int, leaf_values: np.ndarray) -> np.ndarray:
    """Bottom-up sums: heap[p] = sum of leaf_values over leaves under p.

    Returns an array of length 2**(depth+1); slot 0 is unused.
    """
    n = 1 << depth
    if leaf_values.shape != (n,):
        raise TreeError(f"expected {n} leaf values, got shape {leaf_values.shape}")
    heap = np.empty(2 * n, dtype=np.float64)
    heap[n:] = leaf_values
    for k in range(depth - 1, -1, -1):
        lo, hi = 1 << k, 1 << (k + 1)
        child = heap[hi : 2 * hi]
        heap[lo:hi] = child[0::2] + child[1::2]
    heap[0] = np.nan
    return heap


def leaf_broadcast(depth: int, level_values: np.ndarray, level: int) -> np.ndarray:
    """Spread one value per level-`level` node onto the 2**depth leaves."""
    if level_values.shape != (1 << level,):
        raise TreeError("level_values length does not match level")
    return np.repeat(level_values, 1 << (depth - level))
