"""Sublattices of Z^s, finite quotients, and their character groups.

A :class:`Sublattice` is stored by its column Hermite normal form.  The quotient
``G = Z^s / L`` is coordinatised through the Smith form ``U B V = diag(d)``:
``pi(lam) = (U lam) mod d``.  Characters of ``Z^s`` trivial on ``L`` are returned
as :class:`TorusPoint` objects, enumerated lexicographically in the Smith index
tuple ``(k_1, ..., k_s)`` with ``0 <= k_i < d_i``.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

from .field_tower import (
    FieldContext,
    FieldElement,
    FieldError,
    build_field,
    multiplicative_order,
    multiplicative_order_mod,
    primitive_root_of_unity,
)

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]


class LatticeError(ValueError):
    pass


class SingularLatticeError(LatticeError):
    """The generators do not span a finite-index sublattice."""


class NotPSaturatedError(LatticeError):
    """The sublattice has index divisible by the characteristic."""


# --- integer matrices ----------------------------------------------------------------


def _mat(rows) -> list[list[int]]:
    return [[int(v) for v in row] for row in rows]


def _frozen(rows) -> IntMatrix:
    return tuple(tuple(row) for row in rows)


def identity(s: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(s)) for i in range(s))


def matmul(a, b) -> IntMatrix:
    cols = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a, v) -> IntVector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def determinant(rows) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    m = _mat(rows)
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def hermite_normal_form(rows) -> IntMatrix:
    """Column-style Hermite normal form of a nonsingular square matrix.

    The result ``H = M W`` (``W`` unimodular) is upper triangular with positive
    diagonal and ``0 <= H[i][j] < H[i][i]`` for ``j > i``.
    """
    h = _mat(rows)
    s = len(h)
    if any(len(r) != s for r in h):
        raise LatticeError("Hermite form requires a square matrix")
    if determinant(h) == 0:
        raise SingularLatticeError("generators span a sublattice of infinite index")

    def colop(dst, src, k):
        for r in range(s):
            h[r][dst] -= k * h[r][src]

    for i in range(s - 1, -1, -1):
        # gcd-reduce row i over columns 0..i into column i
        while True:
            nz = [c for c in range(i + 1) if h[i][c] != 0]
            piv = min(nz, key=lambda c: abs(h[i][c]))
            done = True
            for c in nz:
                if c != piv:
                    colop(c, piv, h[i][c] // h[i][piv])
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if piv != i:
            for r in range(s):
                h[r][i], h[r][piv] = h[r][piv], h[r][i]
        if h[i][i] < 0:
            for r in range(s):
                h[r][i] = -h[r][i]
    for i in range(s - 1, -1, -1):
        for j in range(i + 1, s):
            colop(j, i, h[i][j] // h[i][i])
    return _frozen(h)


def smith_normal_form(rows) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """``(U, D, V)`` with ``U M V = D`` diagonal, ``d_1 | d_2 | ...``, ``U, V`` unimodular."""
    u, d, v, _ = _smith(rows)
    return u, d, v


def _smith(rows):
    a = _mat(rows)
    s = len(a)
    u = _mat(identity(s))
    uinv = _mat(identity(s))
    v = _mat(identity(s))

    def row_add(dst, src, k):  # row_dst -= k * row_src
        a[dst] = [x - k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - k * y for x, y in zip(u[dst], u[src])]
        for r in range(s):
            uinv[r][src] += k * uinv[r][dst]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in range(s):
            uinv[r][i], uinv[r][j] = uinv[r][j], uinv[r][i]

    def col_add(dst, src, k):  # col_dst -= k * col_src
        for r in range(s):
            a[r][dst] -= k * a[r][src]
            v[r][dst] -= k * v[r][src]

    def col_swap(i, j):
        for r in range(s):
            a[r][i], a[r][j] = a[r][j], a[r][i]
            v[r][i], v[r][j] = v[r][j], v[r][i]

    for t in range(s):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, s) for j in range(t, s) if a[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            if i != t:
                row_swap(t, i)
            if j != t:
                col_swap(t, j)
            clean = True
            for i in range(t + 1, s):
                if a[i][t]:
                    row_add(i, t, a[i][t] // a[t][t])
                    clean &= a[i][t] == 0
            for j in range(t + 1, s):
                if a[t][j]:
                    col_add(j, t, a[t][j] // a[t][t])
                    clean &= a[t][j] == 0
            if not clean:
                continue
            bad = [(i, j) for i in range(t + 1, s) for j in range(t + 1, s) if a[i][j] % a[t][t]]
            if not bad:
                break
            # fold the offending row into row t, then reduce again
            row_add(t, bad[0][0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
            for r in range(s):
                uinv[r][t] = -uinv[r][t]
    return _frozen(u), _frozen(a), _frozen(v), _frozen(uinv)


def _column_echelon(rows) -> tuple[list[list[int]], list[list[int]]]:
    """Integer column echelon form ``M W = E`` with unimodular ``W``."""
    m = _mat(rows)
    nr = len(m)
    nc = len(m[0]) if m else 0
    w = _mat(identity(nc))

    def colop(dst, src, k):
        for r in range(nr):
            m[r][dst] -= k * m[r][src]
        for r in range(nc):
            w[r][dst] -= k * w[r][src]

    def colswap(i, j):
        for r in range(nr):
            m[r][i], m[r][j] = m[r][j], m[r][i]
        for r in range(nc):
            w[r][i], w[r][j] = w[r][j], w[r][i]

    pc = 0
    for r in range(nr):
        if pc >= nc:
            break
        while True:
            nz = [c for c in range(pc, nc) if m[r][c]]
            if not nz:
                break
            piv = min(nz, key=lambda c: abs(m[r][c]))
            for c in nz:
                if c != piv:
                    colop(c, piv, m[r][c] // m[r][piv])
            if all(m[r][c] == 0 for c in range(pc, nc) if c != piv):
                colswap(pc, piv)
                pc += 1
                break
    return m, w


# --- sublattices and quotients ------------------------------------------------------


@dataclass(frozen=True)
class Sublattice:
    """A finite-index sublattice of Z^s; ``basis`` columns generate it (Hermite form)."""

    basis: IntMatrix

    @classmethod
    def from_generators(cls, rows) -> Sublattice:
        rows = _mat(rows)
        return cls(hermite_normal_form(rows) if rows else ())

    @classmethod
    def full(cls, s: int) -> Sublattice:
        return cls(identity(s))

    @classmethod
    def scaled(cls, s: int, k: int) -> Sublattice:
        return cls.from_generators([[k * int(i == j) for j in range(s)] for i in range(s)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def columns(self) -> list[IntVector]:
        return [tuple(row[j] for row in self.basis) for j in range(self.rank)]

    def contains(self, lam: Sequence[int]) -> bool:
        """Membership by back substitution in the triangular basis."""
        x = [int(v) for v in lam]
        if len(x) != self.rank:
            raise LatticeError("vector length differs from the lattice rank")
        for i in range(self.rank - 1, -1, -1):
            h = self.basis[i][i]
            if x[i] % h:
                return False
            k = x[i] // h
            for r in range(i + 1):
                x[r] -= k * self.basis[r][i]
        return True

    def reduce(self, lam: Sequence[int]) -> IntVector:
        """Canonical residue of ``lam`` in the box ``0 <= x_i < H_ii``."""
        x = [int(v) for v in lam]
        for i in range(self.rank - 1, -1, -1):
            k = x[i] // self.basis[i][i]
            if k:
                for r in range(i + 1):
                    x[r] -= k * self.basis[r][i]
        return tuple(x)

    def coordinates(self, lam: Sequence[int]) -> IntVector:
        """The integer vector ``c`` with ``basis @ c == lam``; requires membership."""
        x = [int(v) for v in lam]
        c = [0] * self.rank
        for i in range(self.rank - 1, -1, -1):
            h = self.basis[i][i]
            if x[i] % h:
                raise LatticeError(f"{tuple(lam)} is not in the sublattice")
            c[i] = x[i] // h
            for r in range(i + 1):
                x[r] -= c[i] * self.basis[r][i]
        return tuple(c)

    def residues(self) -> list[IntVector]:
        """Canonical coset representatives, first coordinate varying fastest."""
        ranges = [range(self.basis[i][i]) for i in range(self.rank)]
        return [tuple(reversed(t)) for t in itertools.product(*reversed(ranges))]

    def __str__(self) -> str:
        return format_sublattice(self)


def index(sub: Sublattice) -> int:
    return abs(determinant(sub.basis))


def is_p_saturated(sub: Sublattice, p: int) -> bool:
    return math.gcd(index(sub), p) == 1


def require_p_saturated(sub: Sublattice, p: int) -> None:
    if not is_p_saturated(sub, p):
        raise NotPSaturatedError(
            f"sublattice {format_sublattice(sub)} has index {index(sub)} divisible by p={p}")


def intersect(a: Sublattice, b: Sublattice) -> Sublattice:
    s = a.rank
    if b.rank != s:
        raise LatticeError("rank mismatch")
    stacked = [list(a.basis[i]) + [-x for x in b.basis[i]] for i in range(s)]
    _, w = _column_echelon(stacked)
    kernel = [[w[r][c] for r in range(s)] for c in range(s, 2 * s)]  # top halves
    gens = [matvec(a.basis, k) for k in kernel]
    return Sublattice.from_generators([[g[i] for g in gens] for i in range(s)])


def sum_lattice(a: Sublattice, b: Sublattice) -> Sublattice:
    s = a.rank
    stacked = [list(a.basis[i]) + list(b.basis[i]) for i in range(s)]
    e, _ = _column_echelon(stacked)
    return Sublattice.from_generators([row[:s] for row in e])


@dataclass(frozen=True, eq=False)
class QuotientData:
    """The finite group ``G = Z^s / sub`` in Smith coordinates."""

    sublattice: Sublattice
    index: int
    invariant_factors: tuple[int, ...]
    U: IntMatrix
    V: IntMatrix
    Uinv: IntMatrix
    _lifts: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.sublattice.rank

    def project(self, lam: Sequence[int]) -> IntVector:
        return tuple(x % d for x, d in zip(matvec(self.U, lam), self.invariant_factors))

    def elements(self) -> list[IntVector]:
        """Group elements in lexicographic order of Smith coordinates."""
        return [tuple(t) for t in itertools.product(*(range(d) for d in self.invariant_factors))]

    def lift(self, g: Sequence[int]) -> IntVector:
        g = tuple(g)
        lam = self._lifts.get(g)
        if lam is None:
            lam = matvec(self.Uinv, g)
            self._lifts[g] = lam
        return lam

    def add(self, g, h) -> IntVector:
        return tuple((x + y) % d for x, y, d in zip(g, h, self.invariant_factors))

    def sub(self, g, h) -> IntVector:
        return tuple((x - y) % d for x, y, d in zip(g, h, self.invariant_factors))

    def zero(self) -> IntVector:
        return tuple(0 for _ in self.invariant_factors)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.invariant_factors) if self.invariant_factors else 1


_QUOTIENTS: dict[Sublattice, QuotientData] = {}


def quotient(sub: Sublattice) -> QuotientData:
    q = _QUOTIENTS.get(sub)
    if q is None:
        u, d, v, uinv = _smith(sub.basis)
        q = QuotientData(sub, index(sub), tuple(d[i][i] for i in range(sub.rank)), u, v, uinv)
        _QUOTIENTS[sub] = q
    return q


# --- characters as torus points ------------------------------------------------------


class TorusPoint:
    """A point ``z`` of the torus, read as the character ``lam -> z^lam``.

    ``label`` is the Smith index tuple when the point came from :func:`dual_subgroup`.
    """

    __slots__ = ("ctx", "coords", "label", "_order")

    def __init__(self, coords: Sequence[FieldElement], ctx: FieldContext | None = None,
                 label: tuple[int, ...] | None = None):
        coords = tuple(coords)
        if ctx is None:
            if not coords:
                raise LatticeError("a rank-0 torus point needs an explicit field")
            ctx = coords[0].ctx
        if any(c.ctx is not ctx for c in coords):
            raise FieldError("torus coordinates must share one field")
        if any(c.is_zero() for c in coords):
            raise LatticeError("torus coordinates must be nonzero")
        self.ctx = ctx
        self.coords = coords
        self.label = label
        self._order = None

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = math.lcm(1, *(multiplicative_order(c) for c in self.coords))
        return self._order

    def inverse(self) -> TorusPoint:
        return TorusPoint([c**-1 for c in self.coords], self.ctx)

    def __mul__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint([a * b for a, b in zip(self.coords, other.coords)], self.ctx)

    def __pow__(self, k: int) -> TorusPoint:
        return TorusPoint([c**k for c in self.coords], self.ctx)

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusPoint) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def sort_key(self):
        return tuple(c.sort_key() for c in self.coords)

    def __repr__(self) -> str:
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"


def evaluate_character(z: TorusPoint, lam: Sequence[int]) -> FieldElement:
    if len(lam) != z.rank:
        raise LatticeError("vector length differs from the torus rank")
    out = z.ctx.one
    for c, k in zip(z.coords, lam):
        if k:
            out = out * c**k
    return out


def dual_field(sub: Sublattice, p: int, *degrees: int) -> FieldContext:
    """Smallest field holding the characters trivial on ``sub`` and the given subfields."""
    e = quotient(sub).exponent
    if e % p == 0:
        raise NotPSaturatedError(f"exponent {e} of the quotient is divisible by p={p}")
    return build_field(p, math.lcm(multiplicative_order_mod(p, e), *degrees))


def dual_subgroup(sub: Sublattice, p: int, field: FieldContext | None = None) -> list[TorusPoint]:
    """All characters of Z^s trivial on ``sub`` (the annihilator), as torus points."""
    require_p_saturated(sub, p)
    q = quotient(sub)
    if field is None:
        field = dual_field(sub, p)
    elif field.p != p:
        raise FieldError("field characteristic differs from p")
    e = q.exponent
    zeta = primitive_root_of_unity(field, e)
    powers = [field.one]
    for _ in range(e - 1):
        powers.append(powers[-1] * zeta)
    s = q.rank
    scale = [e // d for d in q.invariant_factors]
    out = []
    for k in q.elements():
        coords = []
        for j in range(s):
            expo = sum(k[i] * scale[i] * q.U[i][j] for i in range(s)) % e
            coords.append(powers[expo])
        out.append(TorusPoint(coords, field, label=k))
    return out


def character_on_group(z: TorusPoint, q: QuotientData, g: Sequence[int]) -> FieldElement:
    """Value of a character trivial on the sublattice at a group element of ``G``."""
    return evaluate_character(z, q.lift(g))


# --- text syntax -------------------------------------------------------------------------


def parse_sublattice(text: str, rank: int | None = None) -> Sublattice:
    """``"d"`` (d*Z, or d*Z^s when ``rank`` is given) or row-major ``"a,b;c,d"``."""
    s = str(text).strip()
    try:
        rows = [[int(x) for x in r.split(",")] for r in s.split(";")] if s else []
    except ValueError as exc:
        raise LatticeError(f"malformed sublattice {text!r}") from exc
    if len(rows) == 1 and len(rows[0]) == 1 and rank not in (None, 1):
        return Sublattice.scaled(rank, rows[0][0])
    if any(len(r) != len(rows) for r in rows):
        raise LatticeError(f"sublattice {text!r} is not square")
    if rank is not None and len(rows) != rank:
        raise LatticeError(f"sublattice {text!r} has rank {len(rows)}, expected {rank}")
    return Sublattice.from_generators(rows)


def format_sublattice(sub: Sublattice) -> str:
    return ";".join(",".join(str(x) for x in row) for row in sub.basis)


def iter_vectors(box: int, s: int) -> Iterator[IntVector]:
    return itertools.product(range(-box, box + 1), repeat=s)
