"""Fragmentation: scalar objects on Z^s become vector objects on a finite-index sublattice.

With representatives ``v_1..v_n`` of ``Z^s / L`` and ``L = H Z^s`` (``H`` the Hermite
basis), a function ``f`` on ``Z^s`` becomes ``lam -> (f(H lam + v_i))_i`` and a group
algebra element ``a`` becomes the matrix ``b_ij(nu) = a(v_i - v_j + H nu)``.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass

from .field_tower import FieldContext, FieldElement, embed
from .group_algebra import GroupAlgebraElement, PeriodicFunction
from .lattice_quotient import (
    Sublattice,
    index,
    intersect,
    matvec,
)
from .matrix_spectral import MatrixOperator


class FragmentationError(ValueError):
    pass


@dataclass(frozen=True)
class FragmentationMap:
    big_rank: int
    sub: Sublattice
    reps: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.reps)

    def rep_index(self, lam: Sequence[int]) -> int:
        return self._positions()[self.sub.reduce(lam)]

    def _positions(self) -> dict:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {r: i for i, r in enumerate(self.reps)}
            object.__setattr__(self, "_pos", pos)
        return pos

    def embed_point(self, lam: Sequence[int]) -> tuple[int, ...]:
        """``H lam``: a sublattice coordinate vector as a point of the big lattice."""
        return matvec(self.sub.basis, lam)


def fragmentation_map(sub: Sublattice) -> FragmentationMap:
    return FragmentationMap(sub.rank, sub, tuple(sub.residues()))


def _small_period(big_period: Sublattice, fmap: FragmentationMap) -> Sublattice:
    """A period lattice of the fragmented function, in sublattice coordinates.

    A function periodic under ``L'`` is also periodic under ``L' & sub``, which is
    what the fragment sees.
    """
    if big_period.rank != fmap.big_rank:
        raise FragmentationError("rank mismatch")
    coords = [fmap.sub.coordinates(c) for c in intersect(big_period, fmap.sub).columns]
    s = fmap.big_rank
    return Sublattice.from_generators([[c[i] for c in coords] for i in range(s)])


def _big_period(small_period: Sublattice, fmap: FragmentationMap) -> Sublattice:
    cols = [fmap.embed_point(c) for c in small_period.columns]
    s = fmap.big_rank
    return Sublattice.from_generators([[c[i] for c in cols] for i in range(s)])


def fragment_function(f: PeriodicFunction, fmap: FragmentationMap) -> PeriodicFunction:
    """``lam -> (f(H lam + v_1), ..., f(H lam + v_n))``."""
    if f.n != 1:
        raise FragmentationError("only scalar functions are fragmented")
    if f.rank != fmap.big_rank:
        raise FragmentationError("rank mismatch")
    small = _small_period(f.sublattice, fmap)

    def value(lam):
        base = fmap.embed_point(lam)
        return tuple(f(tuple(b + r for b, r in zip(base, v))) for v in fmap.reps)

    return PeriodicFunction.from_callable(small, f.ctx, value, fmap.n)


def unfragment_function(f: PeriodicFunction, fmap: FragmentationMap) -> PeriodicFunction:
    """Inverse of :func:`fragment_function`: ``F(H lam + v_i) = f_i(lam)``."""
    if f.n != fmap.n or f.rank != fmap.big_rank:
        raise FragmentationError("function does not match the fragmentation map")
    big = _big_period(f.sublattice, fmap)

    def value(x):
        i = fmap.rep_index(x)
        lam = fmap.sub.coordinates(tuple(a - b for a, b in zip(x, fmap.reps[i])))
        return (f.vector(lam)[i],)

    return PeriodicFunction.from_callable(big, f.ctx, value)


def fragment_operator(a: GroupAlgebraElement, fmap: FragmentationMap) -> MatrixOperator:
    """The ``n x n`` operator intertwining convolution by ``a`` with fragmentation."""
    if a.rank != fmap.big_rank:
        raise FragmentationError("rank mismatch")
    n = fmap.n
    terms: list[list[dict]] = [[{} for _ in range(n)] for _ in range(n)]
    for w, c in a.terms.items():
        for i, vi in enumerate(fmap.reps):
            x = tuple(p - q for p, q in zip(vi, w))
            j = fmap.rep_index(x)
            nu = fmap.sub.coordinates(tuple(p - q + r for p, q, r in zip(w, vi, fmap.reps[j])))
            d = terms[i][j]
            d[nu] = d[nu] + c if nu in d else c
    entries = [[GroupAlgebraElement(a.ctx, a.rank, t) for t in row] for row in terms]
    return MatrixOperator(a.ctx, a.rank, entries)


# --- voltage graphs ----------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    label: tuple[int, ...]
    weight: FieldElement


@dataclass(frozen=True)
class VoltageGraph:
    ctx: FieldContext
    vertices: int
    rank: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        for e in self.edges:
            if not (0 <= e.tail < self.vertices and 0 <= e.head < self.vertices):
                raise FragmentationError(f"edge {e.tail}->{e.head} has an endpoint out of range")
            if len(e.label) != self.rank:
                raise FragmentationError(f"edge label {e.label} has length {len(e.label)}, expected {self.rank}")


def voltage_operator(vg: VoltageGraph, laplace: bool = False) -> MatrixOperator:
    """Entry ``(i, j)`` sums ``weight * delta_-label`` over edges ``j -> i``.

    The Laplace variant subtracts the weighted in-degree on the diagonal; degrees
    are taken in the field, so they can vanish in small characteristic.
    """
    n, s, ctx = vg.vertices, vg.rank, vg.ctx
    terms: list[list[dict]] = [[{} for _ in range(n)] for _ in range(n)]
    degree = [ctx.zero] * n
    for e in vg.edges:
        lam = tuple(-x for x in e.label)
        w = embed(e.weight, ctx)
        d = terms[e.head][e.tail]
        d[lam] = d[lam] + w if lam in d else w
        degree[e.head] = degree[e.head] + w
    if laplace:
        zero = (0,) * s
        for i in range(n):
            d = terms[i][i]
            d[zero] = d[zero] - degree[i] if zero in d else -degree[i]
    return MatrixOperator(ctx, s, [[GroupAlgebraElement(ctx, s, t) for t in row] for row in terms])


def max_abelian_cover(vertices: int, edges: Sequence[tuple[int, int]], ctx: FieldContext,
                      weights: Sequence[FieldElement] | None = None) -> VoltageGraph:
    """Voltage presentation of the maximal abelian cover of a connected multigraph.

    A spanning tree is grown by breadth-first search visiting neighbours in
    increasing order (ties between parallel edges broken by edge position).  Tree
    edges get label 0; the remaining edges get ``e_1, ..., e_s`` in input order.
    Every undirected edge yields both orientations, the reverse one with the
    negated label.
    """
    if vertices < 1:
        raise FragmentationError("graph has no vertices")
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(vertices)}
    for k, (a, b) in enumerate(edges):
        if not (0 <= a < vertices and 0 <= b < vertices):
            raise FragmentationError(f"edge ({a}, {b}) has an endpoint out of range")
        adj[a].append((b, k))
        if a != b:
            adj[b].append((a, k))
    tree: set[int] = set()
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w, k in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                tree.add(k)
                queue.append(w)
    if len(seen) != vertices:
        raise FragmentationError("graph is not connected")
    chords = [k for k in range(len(edges)) if k not in tree]
    s = len(chords)
    label_of = {k: tuple(int(i == chords.index(k)) for i in range(s)) if k in chords else (0,) * s
                for k in range(len(edges))}
    out = []
    for k, (a, b) in enumerate(edges):
        w = ctx.one if weights is None else weights[k]
        lab = label_of[k]
        out.append(Edge(a, b, lab, w))
        out.append(Edge(b, a, tuple(-x for x in lab), w))
    return VoltageGraph(ctx, vertices, s, tuple(out))


def period_is_p_saturated(f: PeriodicFunction) -> bool:
    return index(f.sublattice) % f.ctx.p != 0

