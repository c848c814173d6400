"""Matrix convolution operators on periodic vector functions and their spectra.

For an ``n x n`` matrix ``A`` of group algebra elements, the operator ``f -> A * f``
on ``sub``-periodic functions splits over the characters ``z`` trivial on ``sub``:
on ``z^lam * u`` it acts as the constant matrix ``A^(z^-1)``.  Everything below works
one character at a time and reassembles the pieces.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

from .field_tower import (
    FieldContext,
    FieldElement,
    FieldError,
    build_field,
    embed,
    poly_roots,
    to_flint_poly,
)
from .group_algebra import (
    GroupAlgebraElement,
    GroupAlgebraError,
    LaurentPoly,
    PeriodicFunction,
    character_function,
    convolve_periodic,
    evaluate_laurent,
    fourier,
    inverse_fourier,
)
from .lattice_quotient import (
    Sublattice,
    TorusPoint,
    dual_field,
    dual_subgroup,
    require_p_saturated,
)
from . import linalg


class OperatorError(ValueError):
    pass


class MatrixOperator:
    """An ``n x n`` matrix of group algebra elements over one field and rank."""

    __slots__ = ("ctx", "rank", "n", "entries")

    def __init__(self, ctx: FieldContext, rank: int, entries: Sequence[Sequence[GroupAlgebraElement]]):
        rows = [list(r) for r in entries]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise OperatorError("operator matrix must be square")
        for r in rows:
            for a in r:
                if a.rank != rank:
                    raise OperatorError(f"entry of rank {a.rank} in a rank-{rank} operator")
                if ctx.m % a.ctx.m or a.ctx.p != ctx.p:
                    raise FieldError(f"entry over {a.ctx!r} does not embed into {ctx!r}")
        self.ctx = ctx
        self.rank = rank
        self.n = n
        self.entries = tuple(tuple(GroupAlgebraElement(ctx, rank, a.terms) for a in r) for r in rows)

    @classmethod
    def identity(cls, ctx: FieldContext, rank: int, n: int) -> MatrixOperator:
        return cls.scalar_matrix(GroupAlgebraElement.one(ctx, rank), n)

    @classmethod
    def zero(cls, ctx: FieldContext, rank: int, n: int) -> MatrixOperator:
        z = GroupAlgebraElement.zero(ctx, rank)
        return cls(ctx, rank, [[z] * n for _ in range(n)])

    @classmethod
    def scalar_matrix(cls, a: GroupAlgebraElement, n: int) -> MatrixOperator:
        """``a`` on the diagonal."""
        z = GroupAlgebraElement.zero(a.ctx, a.rank)
        return cls(a.ctx, a.rank, [[a if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_scalar(cls, a: GroupAlgebraElement) -> MatrixOperator:
        return cls(a.ctx, a.rank, [[a]])

    def __getitem__(self, ij) -> GroupAlgebraElement:
        i, j = ij
        return self.entries[i][j]

    def coefficient_degree(self) -> int:
        return math.lcm(1, *(a.coefficient_degree() for r in self.entries for a in r if not a.is_zero()))

    def to_field(self, ctx: FieldContext) -> MatrixOperator:
        if ctx is self.ctx:
            return self
        return MatrixOperator(ctx, self.rank, [[a.to_field(ctx) for a in r] for r in self.entries])

    def _common(self, other: MatrixOperator):
        if other.n != self.n or other.rank != self.rank:
            raise OperatorError("operators of different shapes")
        if other.ctx is self.ctx:
            return self, other
        m = math.lcm(self.ctx.m, other.ctx.m)
        ctx = build_field(self.ctx.p, m)
        return self.to_field(ctx), other.to_field(ctx)

    def __add__(self, other: MatrixOperator) -> MatrixOperator:
        a, b = self._common(other)
        return MatrixOperator(a.ctx, a.rank, [[x + y for x, y in zip(r, s)] for r, s in zip(a.entries, b.entries)])

    def __neg__(self) -> MatrixOperator:
        return MatrixOperator(self.ctx, self.rank, [[-x for x in r] for r in self.entries])

    def __sub__(self, other: MatrixOperator) -> MatrixOperator:
        return self + (-other)

    def scale(self, c) -> MatrixOperator:
        rows = [[x.scale(c) for x in r] for r in self.entries]
        ctx = rows[0][0].ctx if rows else self.ctx
        return MatrixOperator(ctx, self.rank, rows)

    def __matmul__(self, other: MatrixOperator) -> MatrixOperator:
        """Operator composition (matrix product with convolution)."""
        a, b = self._common(other)
        n = a.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = GroupAlgebraElement.zero(a.ctx, a.rank)
                for k in range(n):
                    x, y = a.entries[i][k], b.entries[k][j]
                    if not x.is_zero() and not y.is_zero():
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return MatrixOperator(a.ctx, a.rank, out)

    __mul__ = __matmul__

    def __pow__(self, k: int) -> MatrixOperator:
        if k < 0:
            return self.inverse() ** (-k)
        out = MatrixOperator.identity(self.ctx, self.rank, self.n)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def inverse(self) -> MatrixOperator:
        """Inverse in the convolution algebra; exists iff the symbol determinant is a unit monomial."""
        det = det_symbol(self)
        if not det.is_monomial():
            raise OperatorError("operator is not invertible: determinant of the symbol is not a monomial")
        det_inv = inverse_fourier(det) ** -1
        adj = _adjugate([[fourier(a) for a in r] for r in self.entries], self.ctx, self.rank)
        return MatrixOperator(self.ctx, self.rank, [[inverse_fourier(c) * det_inv for c in r] for r in adj])

    def apply(self, f: PeriodicFunction) -> PeriodicFunction:
        return convolve_periodic(self.entries, f)

    __call__ = apply

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.entries for a in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixOperator):
            return NotImplemented
        return (self.n, self.rank) == (other.n, other.rank) and all(
            x == y for r, s in zip(self.entries, other.entries) for x, y in zip(r, s))

    __hash__ = None

    def __repr__(self) -> str:
        return f"MatrixOperator(n={self.n}, rank={self.rank}, {self.ctx!r}, {[list(r) for r in self.entries]})"


# --- symbols and determinants ---------------------------------------------------------


def symbol_matrix(A: MatrixOperator, z: TorusPoint) -> linalg.Matrix:
    """``A^(z^-1)``: every entry's Laurent polynomial evaluated at the inverse point."""
    zi = z.inverse()
    return [[evaluate_laurent(a, zi) for a in r] for r in A.entries]


def _laurent_det(rows: list[list[LaurentPoly]], ctx: FieldContext, rank: int) -> LaurentPoly:
    """Cofactor expansion along the first row, memoised on the remaining column set."""
    n = len(rows)
    zero = LaurentPoly(ctx, rank)
    if n == 0:
        return LaurentPoly(ctx, rank, [((0,) * rank, 1)])
    memo: dict[tuple[int, tuple[int, ...]], LaurentPoly] = {}

    def det(r: int, cols: tuple[int, ...]) -> LaurentPoly:
        if r == n:
            return LaurentPoly(ctx, rank, [((0,) * rank, 1)])
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = zero
        for k, c in enumerate(cols):
            entry = rows[r][c]
            if entry.is_zero():
                continue
            minor = det(r + 1, cols[:k] + cols[k + 1:])
            if minor.is_zero():
                continue
            term = entry * minor
            acc = acc - term if k % 2 else acc + term
        memo[key] = acc
        return acc

    return det(0, tuple(range(n)))


def _adjugate(rows, ctx, rank):
    n = len(rows)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            d = _laurent_det(minor, ctx, rank)
            out[j][i] = -d if (i + j) % 2 else d
    return out


def det_symbol(A: MatrixOperator) -> LaurentPoly:
    """The determinant of the Laurent-polynomial matrix of ``A``."""
    return _laurent_det([[fourier(a) for a in r] for r in A.entries], A.ctx, A.rank)


def finite_support_solution(A: MatrixOperator) -> list[GroupAlgebraElement] | None:
    """A nonzero finitely supported ``f`` with ``A * f = 0``, or ``None`` if none exists.

    When the symbol determinant vanishes, the matrix of Laurent polynomials has some
    rank ``r < n``; signed maximal minors of an ``r x (r+1)`` submatrix through a
    nonzero ``r x r`` minor give a polynomial kernel vector directly.
    """
    if not det_symbol(A).is_zero():
        return None
    n, ctx, rank = A.n, A.ctx, A.rank
    sym = [[fourier(a) for a in r] for r in A.entries]
    found = None
    for r in range(n - 1, 0, -1):
        for rows in itertools.combinations(range(n), r):
            for cols in itertools.combinations(range(n), r):
                m = _laurent_det([[sym[i][j] for j in cols] for i in rows], ctx, rank)
                if not m.is_zero():
                    found = (rows, cols)
                    break
            if found:
                break
        if found:
            break
    x = [LaurentPoly(ctx, rank) for _ in range(n)]
    if found is None:
        x[0] = LaurentPoly(ctx, rank, [((0,) * rank, 1)])
    else:
        rows, cols = found
        extra = next(c for c in range(n) if c not in cols)
        allcols = sorted(cols + (extra,))
        for k, c in enumerate(allcols):
            rest = [cc for cc in allcols if cc != c]
            d = _laurent_det([[sym[i][j] for j in rest] for i in rows], ctx, rank)
            x[c] = -d if k % 2 else d
    f = [inverse_fourier(v) for v in x]
    # direct check by convolution
    for i in range(n):
        acc = GroupAlgebraElement.zero(ctx, rank)
        for j in range(n):
            acc = acc + A.entries[i][j] * f[j]
        if not acc.is_zero():
            raise AssertionError("finite support solution failed verification")  # pragma: no cover
    if all(v.is_zero() for v in f):
        raise AssertionError("finite support solution is zero")  # pragma: no cover
    return f


def apply_to_finite(A: MatrixOperator, f: Sequence[GroupAlgebraElement]) -> list[GroupAlgebraElement]:
    out = []
    for i in range(A.n):
        acc = GroupAlgebraElement.zero(A.ctx, A.rank)
        for j in range(A.n):
            acc = acc + A.entries[i][j] * f[j]
        out.append(acc)
    return out


# --- elementary solutions and reports ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class ElementarySolution:
    """The vector function ``lam -> z^lam * u``; ``depth`` is its position in a Jordan chain."""

    z: TorusPoint
    u: tuple[FieldElement, ...]
    depth: int = 1
    mu: FieldElement | None = None

    def render(self, sub: Sublattice) -> PeriodicFunction:
        return character_function(self.z, sub, self.u)


@dataclass(eq=False)
class EigenData:
    mu: FieldElement
    multiplicity: int
    blocks: list[int]
    chains: list[list[tuple[FieldElement, ...]]]  # each chain: eigenvector first, head last


@dataclass(eq=False)
class PointSpectrum:
    z: TorusPoint
    symbol: linalg.Matrix
    eigen: list[EigenData]

    def transform(self) -> tuple[linalg.Matrix, linalg.Matrix]:
        """``(P, J)`` with ``P^-1 symbol P = J``; columns of ``P`` are the chain vectors."""
        cols: list[tuple[FieldElement, ...]] = []
        ctx = self.z.ctx
        n = len(self.symbol)
        J = linalg.zeros(ctx, n, n)
        pos = 0
        for e in self.eigen:
            for chain in e.chains:
                for k, v in enumerate(chain):
                    cols.append(v)
                    J[pos][pos] = e.mu
                    if k:
                        J[pos - 1][pos] = ctx.one
                    pos += 1
        P = [[cols[j][i] for j in range(n)] for i in range(n)]
        return P, J


@dataclass(eq=False)
class JordanReport:
    operator: MatrixOperator
    sublattice: Sublattice
    field: FieldContext
    points: list[PointSpectrum]

    def eigenvalues(self) -> list[FieldElement]:
        seen = {}
        for pt in self.points:
            for e in pt.eigen:
                seen[e.mu] = e.mu
        return sorted(seen.values(), key=FieldElement.sort_key)

    def dimensions(self) -> dict[FieldElement, int]:
        out: dict[FieldElement, int] = {}
        for pt in self.points:
            for e in pt.eigen:
                out[e.mu] = out.get(e.mu, 0) + e.multiplicity
        return out

    def block_multisets(self) -> dict[FieldElement, list[int]]:
        out: dict[FieldElement, list[int]] = {}
        for pt in self.points:
            for e in pt.eigen:
                out.setdefault(e.mu, []).extend(e.blocks)
        return {mu: sorted(b, reverse=True) for mu, b in out.items()}

    def basis(self, mu: FieldElement | None = None) -> list[ElementarySolution]:
        out = []
        for pt in self.points:
            for e in pt.eigen:
                if mu is not None and e.mu != mu:
                    continue
                for chain in e.chains:
                    for d, v in enumerate(chain, start=1):
                        out.append(ElementarySolution(pt.z, v, d, e.mu))
        return out


# --- fields ------------------------------------------------------------------------------


def coefficient_field(A: MatrixOperator, sub: Sublattice, *degrees: int) -> FieldContext:
    """Smallest field holding the characters of ``G``, the entries of ``A`` and the extra degrees."""
    return dual_field(sub, A.ctx.p, A.ctx.m, *degrees)


def splitting_field(A: MatrixOperator, sub: Sublattice, *degrees: int) -> FieldContext:
    """One field splitting the characteristic polynomials of all symbols ``A^(z^-1)``."""
    base = coefficient_field(A, sub, *degrees)
    k = 1
    for z in dual_subgroup(sub, A.ctx.p, base):
        cp = linalg.charpoly(symbol_matrix(A, z))
        fac = to_flint_poly(cp, base).factor()
        for g, _ in fac[1]:
            k = math.lcm(k, g.degree())
    return build_field(A.ctx.p, base.m * k)


# --- kernels and spectra --------------------------------------------------------------------


def multipliers(A: MatrixOperator, sub: Sublattice) -> list[TorusPoint]:
    """Characters ``z`` trivial on ``sub`` with ``det A^(z^-1) = 0``."""
    require_p_saturated(sub, A.ctx.p)
    ctx = coefficient_field(A, sub)
    return [z for z in dual_subgroup(sub, A.ctx.p, ctx)
            if linalg.determinant(symbol_matrix(A, z)).is_zero()]


def count_multipliers(A: MatrixOperator, sub: Sublattice) -> int:
    return len(multipliers(A, sub))


def periodic_solutions(A: MatrixOperator, sub: Sublattice) -> list[ElementarySolution]:
    """A basis of the ``sub``-periodic kernel of ``A`` made of elementary solutions."""
    require_p_saturated(sub, A.ctx.p)
    ctx = coefficient_field(A, sub)
    zero = ctx.zero
    out = []
    for z in dual_subgroup(sub, A.ctx.p, ctx):
        S = symbol_matrix(A, z)
        for u in linalg.kernel(S):
            out.append(ElementarySolution(z, tuple(u), 1, zero))
    return out


def _chain_depth(N: linalg.Matrix, u: linalg.Vector) -> int:
    d = 0
    v = list(u)
    while any(not x.is_zero() for x in v):
        v = linalg.matvec(N, v)
        d += 1
    return d


def generalized_eigenspace(A: MatrixOperator, mu: FieldElement, sub: Sublattice) -> list[ElementarySolution]:
    """Per character, a basis of ``ker (A^(z^-1) - mu)^n``, tagged with the character."""
    require_p_saturated(sub, A.ctx.p)
    ctx = coefficient_field(A, sub, mu.ctx.m)
    mu = embed(mu, ctx)
    out = []
    for z in dual_subgroup(sub, A.ctx.p, ctx):
        N = linalg.sub_scalar(symbol_matrix(A, z), mu)
        Nn = linalg.eye(ctx, A.n)
        for _ in range(A.n):
            Nn = linalg.matmul(Nn, N)
        for u in linalg.kernel(Nn):
            out.append(ElementarySolution(z, tuple(u), _chain_depth(N, u), mu))
    return out


def jordan_chains(S: linalg.Matrix, mu: FieldElement) -> EigenData:
    """Jordan chains of ``S`` at ``mu`` by kernel filtration.

    Heads are picked from the highest level down; at each level the RREF basis of
    ``ker N^k`` is scanned in order and a vector is kept when it is independent of
    ``ker N^(k-1)``, of the images of heads already chosen above, and of the heads
    kept so far at this level.
    """
    ctx = mu.ctx
    n = len(S)
    N = linalg.sub_scalar(S, mu)
    kernels: list[list[linalg.Vector]] = [[]]
    power = linalg.eye(ctx, n)
    for _ in range(n):
        power = linalg.matmul(power, N)
        kernels.append(linalg.kernel(power) if n else [])
        if len(kernels[-1]) == len(kernels[-2]):
            kernels.pop()
            break
    top = len(kernels) - 1
    heads: list[tuple[int, linalg.Vector]] = []
    for k in range(top, 0, -1):
        span = [list(v) for v in kernels[k - 1]]
        for level, h in heads:
            v = h
            for _ in range(level - k):
                v = linalg.matvec(N, v)
            span.append(v)
        r = linalg.span_rank(span)
        for cand in kernels[k]:
            trial = span + [list(cand)]
            rr = linalg.span_rank(trial)
            if rr > r:
                span, r = trial, rr
                heads.append((k, list(cand)))
    chains = []
    for level, h in heads:
        chain = [tuple(h)]
        v = h
        for _ in range(level - 1):
            v = linalg.matvec(N, v)
            chain.append(tuple(v))
        chains.append(list(reversed(chain)))
    return EigenData(mu, len(kernels[top]), [len(c) for c in chains], chains)


def point_spectrum(S: linalg.Matrix, z: TorusPoint) -> PointSpectrum:
    ctx = z.ctx
    cp = linalg.charpoly(S)
    roots = poly_roots(cp, ctx)
    if len(roots) != len(S):
        raise FieldError(f"characteristic polynomial does not split over {ctx!r}")
    distinct = sorted(set(roots), key=FieldElement.sort_key)
    eigen = [jordan_chains(S, mu) for mu in distinct]
    for e, mu in zip(eigen, distinct):
        if e.multiplicity != roots.count(mu):
            raise AssertionError("generalized eigenspace dimension differs from multiplicity")  # pragma: no cover
    return PointSpectrum(z, S, eigen)


def jordan_basis(A: MatrixOperator, sub: Sublattice, *degrees: int) -> JordanReport:
    """Jordan data of ``A`` on ``sub``-periodic functions, one character at a time."""
    require_p_saturated(sub, A.ctx.p)
    ctx = splitting_field(A, sub, *degrees)
    points = [point_spectrum(symbol_matrix(A, z), z) for z in dual_subgroup(sub, A.ctx.p, ctx)]
    return JordanReport(A, sub, ctx, points)


def spectral_decomposition(A: MatrixOperator, sub: Sublattice) -> dict[FieldElement, tuple[int, list[ElementarySolution]]]:
    """``mu -> (dim, basis)`` of the generalized eigenspaces restricted to ``sub``-periodic functions."""
    rep = jordan_basis(A, sub)
    dims = rep.dimensions()
    return {mu: (dims[mu], rep.basis(mu)) for mu in rep.eigenvalues()}


def evaluate_phi_of_operator(phi: GroupAlgebraElement, ops: Sequence[MatrixOperator]) -> MatrixOperator:
    """``phi(B_1, ..., B_m)`` for commuting operators (commutation is the caller's job)."""
    if phi.rank != len(ops):
        raise GroupAlgebraError(f"phi has {phi.rank} variables but {len(ops)} operators were given")
    if not ops:
        raise OperatorError("at least one operator is required")
    base = ops[0]
    out = MatrixOperator.zero(base.ctx, base.rank, base.n)
    cache: dict[tuple[int, int], MatrixOperator] = {}
    for lam, c in phi.terms.items():
        term = MatrixOperator.identity(base.ctx, base.rank, base.n)
        for i, e in enumerate(lam):
            if e:
                if (i, e) not in cache:
                    cache[(i, e)] = ops[i] ** e
                term = term @ cache[(i, e)]
        out = out + term.scale(c)
    return out
