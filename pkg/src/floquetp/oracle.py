"""Brute-force reference: the operator as one explicit matrix on the quotient.

A periodic vector function is the column vector of its values at the group
elements of ``G = Z^s / sub``; ``f -> A * f`` is then an ``n|G| x n|G|`` matrix.
Ranks are computed over the prime field by expanding every entry of GF(p^m) into
its ``m x m`` multiplication matrix, so nothing here touches characters, symbols
or the elimination code used by the spectral modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import flint

from .field_tower import FieldContext, FieldElement, build_field, poly_roots, restrict
from .lattice_quotient import Sublattice, quotient
from .matrix_spectral import MatrixOperator


@dataclass(eq=False)
class QuotientMatrix:
    """Rows and columns are indexed by ``(group element, coordinate)``, group element major."""

    ctx: FieldContext
    n: int
    elements: list[tuple[int, ...]]
    rows: list[list[FieldElement]]

    @property
    def size(self) -> int:
        return len(self.rows)

    def position(self, g: tuple[int, ...], i: int) -> int:
        return self.elements.index(tuple(g)) * self.n + i

    def entry(self, r: int, c: int) -> FieldElement:
        return self.rows[r][c]


def build_quotient_matrix(A: MatrixOperator, sub: Sublattice) -> QuotientMatrix:
    """Matrix of ``f -> A * f`` on ``sub``-periodic functions (no saturation needed)."""
    q = quotient(sub)
    elements = q.elements()
    pos = {g: k for k, g in enumerate(elements)}
    n, ctx = A.n, A.ctx
    size = n * len(elements)
    rows = [[ctx.zero] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            for v, c in A.entries[i][j].terms.items():
                pv = q.project(v)
                for g in elements:
                    # (A f)_i(g) picks up a_ij(v) f_j(g - v)
                    r = pos[g] * n + i
                    col = pos[q.sub(g, pv)] * n + j
                    rows[r][col] = rows[r][col] + c
    return QuotientMatrix(ctx, n, elements, rows)


# --- prime-field expansion -----------------------------------------------------------------


def _mult_block(x: FieldElement) -> list[list[int]]:
    """Matrix of ``y -> x y`` in the polynomial basis of ``x.ctx`` (columns are images)."""
    ctx = x.ctx
    cols = []
    b = ctx.one
    for _ in range(ctx.m):
        cols.append((x * b).coeffs)
        b = b * ctx.gen
    return [[cols[k][r] for k in range(ctx.m)] for r in range(ctx.m)]


def expand(rows: list[list[FieldElement]], ctx: FieldContext) -> flint.nmod_mat:
    s = ctx.m
    N = len(rows)
    cache: dict = {}
    big = [[0] * (N * s) for _ in range(N * s)]
    for r, row in enumerate(rows):
        for c, x in enumerate(row):
            if x.is_zero():
                continue
            blk = cache.get(x)
            if blk is None:
                blk = cache[x] = _mult_block(x)
            for a in range(s):
                for b in range(s):
                    big[r * s + a][c * s + b] = blk[a][b]
    return flint.nmod_mat(big, ctx.p) if N else flint.nmod_mat(0, 0, ctx.p)


def _scalar_block(c: FieldElement, N: int) -> flint.nmod_mat:
    ctx = c.ctx
    s = ctx.m
    blk = _mult_block(c)
    big = [[0] * (N * s) for _ in range(N * s)]
    for r in range(N):
        for a in range(s):
            for b in range(s):
                big[r * s + a][r * s + b] = blk[a][b]
    return flint.nmod_mat(big, ctx.p)


def rank(M: QuotientMatrix) -> int:
    return expand(M.rows, M.ctx).rank() // M.ctx.m


def nullity(M: QuotientMatrix) -> int:
    return M.size - rank(M)


def kernel_basis(M: QuotientMatrix) -> list[list[FieldElement]]:
    """Kernel over ``M.ctx`` by plain Gauss-Jordan elimination (kept local on purpose)."""
    ctx = M.ctx
    a = [list(r) for r in M.rows]
    nr = len(a)
    nc = M.size
    piv_cols = []
    r = 0
    for c in range(nc):
        k = next((i for i in range(r, nr) if not a[i][c].is_zero()), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        inv = a[r][c] ** -1
        a[r] = [x * inv for x in a[r]]
        for i in range(nr):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == nr:
            break
    out = []
    for free in (c for c in range(nc) if c not in piv_cols):
        v = [ctx.zero] * nc
        v[free] = ctx.one
        for i, pc in enumerate(piv_cols):
            v[pc] = -a[i][free]
        out.append(v)
    return out


def minimal_polynomial(mu: FieldElement, base: FieldContext) -> list[FieldElement]:
    """Minimal polynomial of ``mu`` over the subfield ``base`` (coefficients in ``base``, low first)."""
    ctx = mu.ctx
    conj = [mu]
    y = mu ** base.order
    while y != mu:
        conj.append(y)
        y = y ** base.order
    poly = [ctx.one]
    for c in conj:
        poly = [ctx.zero] + poly
        for i in range(len(poly) - 1):
            poly[i] = poly[i] - c * poly[i + 1]
    return [restrict(x, base) for x in poly]


def rank_sequence(M: QuotientMatrix, mu: FieldElement, kmax: int | None = None) -> list[int]:
    """``rank (M - mu)^k`` over a field containing ``mu``, for ``k = 0, 1, ...``.

    Runs to ``kmax`` if given, otherwise until the ranks stabilise.  With ``g`` the
    minimal polynomial of ``mu`` over the field of ``M``, the nullity of
    ``(M - mu)^k`` is the nullity of ``g(M)^k`` divided by ``deg g``.
    """
    base = M.ctx
    g = minimal_polynomial(mu, base)
    d = len(g) - 1
    N = M.size
    E = expand(M.rows, base)
    G = _scalar_block(g[-1], N)
    for c in reversed(g[:-1]):
        G = G * E + _scalar_block(c, N)
    s = base.m
    ranks = [N]
    P = flint.nmod_mat(N * s, N * s, [int(i == j) for i in range(N * s) for j in range(N * s)], base.p) if N else G
    while True:
        P = P * G
        null = (N * s - P.rank()) // (s * d) if N else 0
        ranks.append(N - null)
        k = len(ranks) - 1
        if kmax is not None and k >= kmax:
            break
        if kmax is None and ranks[-1] == ranks[-2]:
            break
    return ranks


def blocks_from_ranks(ranks: list[int]) -> list[int]:
    """Jordan block sizes (descending) from a stabilised rank sequence."""
    r = list(ranks) + [ranks[-1]]
    out = []
    for k in range(1, len(r) - 1):
        count = r[k - 1] - 2 * r[k] + r[k + 1]
        out.extend([k] * count)
    return sorted(out, reverse=True)


@dataclass(eq=False)
class OracleSpectrum:
    field: FieldContext
    dimensions: dict[FieldElement, int]
    blocks: dict[FieldElement, list[int]]


def oracle_spectrum(M: QuotientMatrix, field: FieldContext | None = None) -> OracleSpectrum:
    """Eigenvalues with generalized dimensions and Jordan blocks.

    Candidates are the roots of the characteristic polynomial of the prime-field
    expansion, found in a field large enough to split it; conjugates that are not
    eigenvalues of ``M`` itself are discarded by the rank test.
    """
    base = M.ctx
    p = base.p
    E = expand(M.rows, base)
    factors = E.charpoly().factor()[1] if M.size else []
    deg = math.lcm(base.m, field.m if field else 1, *(f.degree() for f, _ in factors))
    L = build_field(p, deg)
    cands = set()
    for f, _ in factors:
        coeffs = [L(int(f[i])) for i in range(f.degree() + 1)]
        cands.update(poly_roots(coeffs, L))
    dims: dict[FieldElement, int] = {}
    blocks: dict[FieldElement, list[int]] = {}
    for mu in sorted(cands, key=FieldElement.sort_key):
        ranks = rank_sequence(M, mu)
        if ranks[-1] == M.size:
            continue
        dims[mu] = M.size - ranks[-1]
        blocks[mu] = blocks_from_ranks(ranks)
    return OracleSpectrum(L, dims, blocks)
