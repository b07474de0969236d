"""Haar shift operators: general and canonical forms, adjoints, application.

A shift acts entirely in the Haar coefficient domain: application is one
analysis pass, a sparse coefficient shuffle, and one synthesis pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .martingale import HaarSpectrum, StepFunction, analyze, synthesize
from .measure import MeasureTree
from .tree import DyadicTree, Node, TreeError


class ShiftError(ValueError):
    """Malformed shift term or incompatible shape."""


@dataclass(frozen=True)
class ShiftShape:
    r: int
    s: int

    def __post_init__(self) -> None:
        if self.r < 0 or self.s < 0:
            raise ShiftError(f"complexity must be non-negative, got {self}")


class GeneralShift:
    """A finite collection of terms (Q, R, S, alpha) with R in D_r(Q), S in D_s(Q).

    Terms whose R or S sits at leaf level carry no Haar function and are
    dropped at construction; `dropped` records how many.
    """

    def __init__(self, depth: int, shape: ShiftShape, terms) -> None:
        if depth < 1:
            raise ShiftError(f"depth must be >= 1, got {depth}")
        tree = DyadicTree(depth)
        kept: list[tuple[Node, Node, Node, float]] = []
        dropped = 0
        for q, r_node, s_node, alpha in terms:
            q, r_node, s_node = Node(*q), Node(*r_node), Node(*s_node)
            tree.check(q)
            if tree.ancestor(r_node, shape.r) != q:
                raise ShiftError(f"R={r_node} is not a depth-{shape.r} descendant of Q={q}")
            if tree.ancestor(s_node, shape.s) != q:
                raise ShiftError(f"S={s_node} is not a depth-{shape.s} descendant of Q={q}")
            if abs(alpha) > 1.0 + 1e-15:
                raise ShiftError(f"|alpha| must be <= 1, got {alpha}")
            if r_node.level >= depth or s_node.level >= depth:
                dropped += 1
                continue
            kept.append((q, r_node, s_node, float(alpha)))
        self.depth = depth
        self.shape = shape
        self.terms = tuple(kept)
        self.dropped = dropped
        self._r_pos = np.array([tree.heap(t[1]) for t in kept], dtype=np.int64)
        self._s_pos = np.array([tree.heap(t[2]) for t in kept], dtype=np.int64)
        self._alpha = np.array([t[3] for t in kept], dtype=np.float64)

    def apply_spectrum(self, spec: HaarSpectrum) -> HaarSpectrum:
        if spec.depth != self.depth:
            raise ShiftError(f"spectrum depth {spec.depth} != shift depth {self.depth}")
        out = np.zeros(1 << self.depth)
        np.add.at(out, self._s_pos, self._alpha * spec.coeffs[self._r_pos])
        return HaarSpectrum(self.depth, 0.0, out)

    def adjoint(self) -> "GeneralShift":
        """Swap input and output Haar indices; satisfies <Tf, g> = <f, T*g>."""
        return GeneralShift(
            self.depth,
            ShiftShape(self.shape.s, self.shape.r),
            [(q, s_node, r_node, a) for q, r_node, s_node, a in self.terms],
        )


def petermichl(depth: int) -> GeneralShift:
    """The dyadic Hilbert transform: h_I maps to h_{I-} - h_{I+}."""
    if depth < 2:
        raise ShiftError(f"the dyadic Hilbert transform needs depth >= 2, got {depth}")
    tree = DyadicTree(depth)
    terms = []
    for k in range(depth - 1):
        for j in range(1 << k):
            q = Node(k, j)
            left, right = tree.children(q)
            terms.append((q, q, left, 1.0))
            terms.append((q, q, right, -1.0))
    return GeneralShift(depth, ShiftShape(0, 1), terms)


@dataclass
class CanonicalShift:
    """Single-selector form: one input selector (m, s_sel) and one output
    selector (n, t_sel), with a sparse per-node coefficient map.

    Absent nodes in `alphas` carry coefficient zero.
    """

    depth: int
    m: int
    s_sel: int
    n: int
    t_sel: int
    alphas: dict[Node, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.m < 0 or self.n < 0:
            raise ShiftError("selector depths must be non-negative")
        if not (0 <= self.s_sel < (1 << self.m)):
            raise ShiftError(f"input selector {self.s_sel} out of range for m={self.m}")
        if not (0 <= self.t_sel < (1 << self.n)):
            raise ShiftError(f"output selector {self.t_sel} out of range for n={self.n}")
        tree = DyadicTree(self.depth)
        clean = {}
        for node, a in self.alphas.items():
            node = tree.check(Node(*node))
            if abs(a) > 1.0 + 1e-15:
                raise ShiftError(f"|alpha| must be <= 1, got {a} at {node}")
            clean[node] = float(a)
        self.alphas = clean
        self.shape = ShiftShape(self.m, self.n)
        self._general: GeneralShift | None = None

    def to_general(self) -> GeneralShift:
        """Lossless embedding into the general term form (cached)."""
        if self._general is not None:
            return self._general
        tree = DyadicTree(self.depth)
        cutoff = self.depth - 1 - max(self.m, self.n)
        terms = []
        for q, a in sorted(self.alphas.items()):
            if q.level > cutoff:
                continue
            terms.append(
                (q, tree.descendant(q, self.m, self.s_sel),
                 tree.descendant(q, self.n, self.t_sel), a)
            )
        self._general = GeneralShift(self.depth, self.shape, terms)
        return self._general

    def apply_spectrum(self, spec: HaarSpectrum) -> HaarSpectrum:
        return self.to_general().apply_spectrum(spec)

    def adjoint(self) -> GeneralShift:
        return self.to_general().adjoint()


def dense_alphas(depth: int, m: int, n: int, value: float = 1.0) -> dict[Node, float]:
    """Coefficient map with the same alpha on every admissible node."""
    cutoff = depth - 1 - max(m, n)
    out = {}
    for k in range(cutoff + 1):
        for j in range(1 << k):
            out[Node(k, j)] = value
    return out


Shift = GeneralShift | CanonicalShift


def apply_shift(T: Shift, f: StepFunction, mu: MeasureTree) -> StepFunction:
    """Tf = sum over terms alpha <f, h_R> h_S."""
    return synthesize(T.apply_spectrum(analyze(f, mu)), mu)


def haar_matrix(T: Shift, mu: MeasureTree | None = None) -> sp.csr_matrix:
    """Sparse Haar-domain matrix: entry (heap(S)-1, heap(R)-1) accumulates alpha.

    The coefficient action of a shift does not depend on the measure; the
    optional argument only cross-checks the depth.
    """
    general = T if isinstance(T, GeneralShift) else T.to_general()
    if mu is not None and mu.depth != general.depth:
        raise ShiftError(f"measure depth {mu.depth} != shift depth {general.depth}")
    n = (1 << general.depth) - 1
    mat = sp.coo_matrix(
        (general._alpha, (general._s_pos - 1, general._r_pos - 1)), shape=(n, n)
    )
    return mat.tocsr()
