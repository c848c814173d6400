"""Dense exact linear algebra over a single :class:`FieldContext`.

Matrices are lists of rows of :class:`FieldElement`.  Everything here is plain
Gaussian elimination; pivots are always chosen leftmost-first so results are
deterministic.
"""

from __future__ import annotations

from collections.abc import Sequence

from .field_tower import FieldContext, FieldElement, embed

Matrix = list[list[FieldElement]]
Vector = list[FieldElement]


def zeros(ctx: FieldContext, rows: int, cols: int) -> Matrix:
    z = ctx.zero
    return [[z] * cols for _ in range(rows)]


def eye(ctx: FieldContext, n: int) -> Matrix:
    m = zeros(ctx, n, n)
    for i in range(n):
        m[i][i] = ctx.one
    return m


def lift_matrix(m: Sequence[Sequence[FieldElement]], ctx: FieldContext) -> Matrix:
    return [[embed(x, ctx) for x in row] for row in m]


def lift_vector(v: Sequence[FieldElement], ctx: FieldContext) -> Vector:
    return [embed(x, ctx) for x in v]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    ctx = a[0][0].ctx if a and a[0] else b[0][0].ctx
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = ctx.zero
            for k, x in enumerate(row):
                if not x.is_zero():
                    y = b[k][j]
                    if not y.is_zero():
                        acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def matvec(a: Matrix, v: Vector) -> Vector:
    out = []
    for row in a:
        acc = v[0].ctx.zero if v else row[0].ctx.zero
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                acc = acc + x * y
        out.append(acc)
    return out


def sub_scalar(a: Matrix, mu: FieldElement) -> Matrix:
    """``a - mu * I``."""
    out = [list(row) for row in a]
    for i in range(len(out)):
        out[i][i] = out[i][i] - mu
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in a]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def kernel(a: Matrix, ncols: int | None = None, ctx: FieldContext | None = None) -> list[Vector]:
    """Basis of the right kernel; one vector per free column, with a 1 there."""
    if not a:
        if ncols is None or ctx is None:
            raise ValueError("empty matrix needs explicit ncols and ctx")
        return [[ctx.one if i == j else ctx.zero for i in range(ncols)] for j in range(ncols)]
    ctx = a[0][0].ctx
    cols = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ctx.zero] * cols
        v[f] = ctx.one
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][f]
        basis.append(v)
    return basis


def span_rank(vectors: Sequence[Vector]) -> int:
    return rank([list(v) for v in vectors]) if vectors else 0


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    ctx = a[0][0].ctx
    aug = [list(row) + [ctx.one if i == j else ctx.zero for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def determinant(a: Matrix) -> FieldElement:
    m = [list(row) for row in a]
    n = len(m)
    ctx = m[0][0].ctx
    det = ctx.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if piv is None:
            return ctx.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def charpoly(a: Matrix) -> list[FieldElement]:
    """Coefficients (low degree first, monic) of ``det(x I - a)``.

    Reduces to upper Hessenberg form by similarity, then runs the usual
    recurrence over the leading principal blocks.
    """
    n = len(a)
    if n == 0:
        return []
    h = [list(row) for row in a]
    ctx = h[0][0].ctx
    for c in range(n - 2):
        piv = next((i for i in range(c + 1, n) if not h[i][c].is_zero()), None)
        if piv is None:
            continue
        if piv != c + 1:
            h[c + 1], h[piv] = h[piv], h[c + 1]
            for row in h:
                row[c + 1], row[piv] = row[piv], row[c + 1]
        inv = h[c + 1][c].inverse()
        for i in range(c + 2, n):
            if h[i][c].is_zero():
                continue
            f = h[i][c] * inv
            h[i] = [x - f * y for x, y in zip(h[i], h[c + 1])]
            for row in h:
                row[c + 1] = row[c + 1] + f * row[i]
    # p_k(x) = det(x I - H_k), recurrence along the last column
    polys: list[list[FieldElement]] = [[ctx.one]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        pk = [ctx.zero] + list(prev)  # x * p_{k-1}
        hkk = h[k - 1][k - 1]
        for i, c in enumerate(prev):
            pk[i] = pk[i] - hkk * c
        prod = ctx.one
        for i in range(k - 1, 0, -1):
            prod = prod * h[i][i - 1]
            coef = prod * h[i - 1][k - 1]
            if coef.is_zero():
                continue
            for t, c in enumerate(polys[i - 1]):
                pk[t] = pk[t] - coef * c
        polys.append(pk)
    return polys[n]


def is_zero_matrix(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)
