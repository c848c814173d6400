"""The group algebra k[Z^s], periodic functions and the Fourier transform on quotients.

Conventions used throughout the package:

* ``(a * f)(lam) = sum_v a(v) f(lam - v)`` and ``shift(f, v)(u) = f(u + v)``, so the
  convolution operator of ``delta_v`` is the shift by ``-v``.
* The symbol of ``a`` is the Laurent polynomial ``sum_v a(v) z^v``; a character ``z``
  satisfies ``a * z^lam = a^(z^-1) z^lam``.
* :func:`dft_forward` stores the coefficient of the character ``chi`` at the torus
  point ``chi^-1``, which turns the convolution theorem into a pointwise product
  ``(a*f)^(w) = a^(w) f^(w)``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping, Sequence

from .field_tower import (
    FieldContext,
    FieldElement,
    FieldError,
    build_field,
    embed,
    format_element,
    minimal_subfield_degree,
    parse_element,
)
from .lattice_quotient import (
    LatticeError,
    QuotientData,
    Sublattice,
    TorusPoint,
    dual_field,
    dual_subgroup,
    evaluate_character,
    intersect,
    quotient,
    require_p_saturated,
)


class GroupAlgebraError(ValueError):
    pass


def _vec(v) -> tuple[int, ...]:
    if isinstance(v, int):
        return (v,)
    return tuple(int(x) for x in v)


def _add(u, v):
    return tuple(x + y for x, y in zip(u, v))


class GroupAlgebraElement:
    """A finitely supported function ``Z^s -> k``; zero values are never stored."""

    __slots__ = ("ctx", "rank", "terms")

    def __init__(self, ctx: FieldContext, rank: int, terms: Mapping | Iterable = ()):
        self.ctx = ctx
        self.rank = rank
        clean: dict[tuple[int, ...], FieldElement] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for lam, c in items:
            lam = _vec(lam)
            if len(lam) != rank:
                raise GroupAlgebraError(f"exponent {lam} has length {len(lam)}, expected {rank}")
            c = ctx(c) if isinstance(c, int) else embed(c, ctx)
            if lam in clean:
                c = clean[lam] + c
            clean[lam] = c
        self.terms = {k: v for k, v in clean.items() if not v.is_zero()}

    # constructors

    @classmethod
    def zero(cls, ctx: FieldContext, rank: int):
        return cls(ctx, rank)

    @classmethod
    def delta(cls, ctx: FieldContext, v: Sequence[int], coeff=1):
        v = _vec(v)
        return cls(ctx, len(v), [(v, coeff)])

    @classmethod
    def one(cls, ctx: FieldContext, rank: int):
        return cls.delta(ctx, (0,) * rank)

    def _like(self, terms, ctx=None):
        return type(self)(ctx or self.ctx, self.rank, terms)

    # queries

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.terms)

    def coefficient(self, lam: Sequence[int]) -> FieldElement:
        return self.terms.get(_vec(lam), self.ctx.zero)

    __call__ = coefficient

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coefficient_degree(self) -> int:
        """Degree over GF(p) of the smallest field holding all coefficients."""
        return math.lcm(1, *(minimal_subfield_degree(c) for c in self.terms.values()))

    def to_field(self, ctx: FieldContext):
        if ctx is self.ctx:
            return self
        return self._like(((k, embed(v, ctx)) for k, v in self.terms.items()), ctx)

    # arithmetic

    def _coerced(self, other):
        if not isinstance(other, GroupAlgebraElement):
            raise TypeError
        if other.rank != self.rank:
            raise GroupAlgebraError(f"rank mismatch: {self.rank} vs {other.rank}")
        if other.ctx is self.ctx:
            return self, other
        big = self.ctx if self.ctx.m % other.ctx.m == 0 else other.ctx
        if big.m % self.ctx.m or big.m % other.ctx.m:
            raise FieldError(f"no common field for {self.ctx!r} and {other.ctx!r}")
        return self.to_field(big), other.to_field(big)

    def __add__(self, other):
        a, b = self._coerced(other)
        terms = dict(a.terms)
        for k, v in b.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return a._like(terms)

    def __neg__(self):
        return self._like((k, -v) for k, v in self.terms.items())

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> GroupAlgebraElement:
        if isinstance(c, int):
            c = self.ctx(c)
        base = self if c.ctx is self.ctx else self.to_field(c.ctx)
        return base._like((k, v * c) for k, v in base.terms.items())

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return convolve(self, other)
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise GroupAlgebraError("only monomials are invertible")
            (lam, c), = self.terms.items()
            return self._like([(tuple(-x for x in lam), c.inverse())]) ** (-k)
        out = self._like([((0,) * self.rank, 1)])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraElement) or other.rank != self.rank:
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for lam in self.support():
            parts.append(f"{format_element(self.terms[lam])}*d{list(lam)}")
        return " + ".join(parts)

    # serialisation

    def to_terms(self) -> list[dict]:
        return [{"lambda": list(lam), "coeff": format_element(self.terms[lam])}
                for lam in self.support()]

    @classmethod
    def from_terms(cls, ctx: FieldContext, rank: int, terms: Sequence[Mapping]):
        seen = set()
        items = []
        for t in terms:
            lam = _vec(t["lambda"])
            if lam in seen:
                raise GroupAlgebraError(f"duplicate exponent {list(lam)}")
            seen.add(lam)
            items.append((lam, parse_element(str(t["coeff"]), ctx)))
        return cls(ctx, rank, items)


class LaurentPoly(GroupAlgebraElement):
    """``sum_lam f(lam) z^lam``; same storage as a group algebra element."""

    __slots__ = ()

    def __call__(self, z: TorusPoint) -> FieldElement:
        return evaluate_laurent(self, z)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for lam in self.support():
            mono = "*".join(f"z{i + 1}^{e}" for i, e in enumerate(lam) if e) or "1"
            parts.append(f"{format_element(self.terms[lam])}*{mono}")
        return " + ".join(parts)


def convolve(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    a, b = a._coerced(b)
    terms: dict[tuple[int, ...], FieldElement] = {}
    for u, x in a.terms.items():
        for v, y in b.terms.items():
            w = _add(u, v)
            xy = x * y
            terms[w] = terms[w] + xy if w in terms else xy
    return a._like(terms)


def fourier(a: GroupAlgebraElement) -> LaurentPoly:
    return LaurentPoly(a.ctx, a.rank, a.terms)


def inverse_fourier(q: LaurentPoly) -> GroupAlgebraElement:
    return GroupAlgebraElement(q.ctx, q.rank, q.terms)


def evaluate_laurent(q: GroupAlgebraElement, z: TorusPoint) -> FieldElement:
    """``sum q(lam) z^lam`` in the field of ``z`` (coefficients are embedded)."""
    if z.rank != q.rank:
        raise GroupAlgebraError("rank mismatch between polynomial and torus point")
    ctx = z.ctx
    if ctx.m % q.ctx.m:
        raise FieldError(f"coefficients over {q.ctx!r} do not embed into {ctx!r}")
    total = ctx.zero
    for lam, c in q.terms.items():
        total = total + embed(c, ctx) * evaluate_character(z, lam)
    return total


def shift_element(ctx: FieldContext, v: Sequence[int]) -> GroupAlgebraElement:
    """The element ``a`` whose convolution operator is the shift by ``v`` (``a = delta_-v``)."""
    return GroupAlgebraElement.delta(ctx, [-x for x in v])


# --- periodic and dual functions --------------------------------------------------------


class PeriodicFunction:
    """A ``sub``-periodic vector function, stored on the quotient group ``G``."""

    __slots__ = ("quotient", "ctx", "n", "values")

    def __init__(self, quotient: QuotientData, ctx: FieldContext, values: Mapping, n: int = 1):
        self.quotient = quotient
        self.ctx = ctx
        self.n = n
        vals = {}
        for g in quotient.elements():
            v = values[g]
            if isinstance(v, (FieldElement, int)):
                v = (v,)
            v = tuple(ctx(x) if isinstance(x, int) else embed(x, ctx) for x in v)
            if len(v) != n:
                raise GroupAlgebraError(f"value at {g} has length {len(v)}, expected {n}")
            vals[g] = v
        if len(vals) != quotient.index:
            raise GroupAlgebraError("values must cover the quotient group")
        self.values = vals

    @classmethod
    def from_callable(cls, sub: Sublattice | QuotientData, ctx: FieldContext,
                      fn: Callable[[tuple[int, ...]], object], n: int = 1) -> PeriodicFunction:
        """Sample ``fn`` (taking an integer vector) at one lift of each group element."""
        q = sub if isinstance(sub, QuotientData) else quotient(sub)
        return cls(q, ctx, {g: fn(q.lift(g)) for g in q.elements()}, n)

    @classmethod
    def zero(cls, sub: Sublattice | QuotientData, ctx: FieldContext, n: int = 1):
        return cls.from_callable(sub, ctx, lambda lam: (ctx.zero,) * n, n)

    @classmethod
    def from_residues(cls, sub: Sublattice, ctx: FieldContext, values: Sequence, n: int = 1):
        """Build from values listed on the canonical residues of ``sub`` (first coordinate fastest)."""
        q = quotient(sub)
        res = sub.residues()
        if len(values) != len(res):
            raise GroupAlgebraError(f"expected {len(res)} values, got {len(values)}")
        return cls(q, ctx, {q.project(r): v for r, v in zip(res, values)}, n)

    @property
    def sublattice(self) -> Sublattice:
        return self.quotient.sublattice

    @property
    def rank(self) -> int:
        return self.quotient.rank

    def __call__(self, lam: Sequence[int]):
        v = self.values[self.quotient.project(lam)]
        return v[0] if self.n == 1 else v

    def vector(self, lam: Sequence[int]) -> tuple[FieldElement, ...]:
        return self.values[self.quotient.project(lam)]

    def on_residues(self) -> list:
        """Values on the canonical residues of the period lattice."""
        return [self(r) for r in self.sublattice.residues()]

    def is_zero(self) -> bool:
        return all(x.is_zero() for v in self.values.values() for x in v)

    def to_field(self, ctx: FieldContext) -> PeriodicFunction:
        if ctx is self.ctx:
            return self
        return PeriodicFunction(self.quotient, ctx, self.values, self.n)

    def _binary(self, other, op):
        if other.quotient.sublattice != self.quotient.sublattice or other.n != self.n:
            raise GroupAlgebraError("periodic functions live on different spaces")
        ctx = self.ctx if self.ctx.m >= other.ctx.m else other.ctx
        a, b = self.to_field(ctx), other.to_field(ctx)
        vals = {g: tuple(op(x, y) for x, y in zip(a.values[g], b.values[g])) for g in a.values}
        return PeriodicFunction(self.quotient, ctx, vals, self.n)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def scale(self, c) -> PeriodicFunction:
        if isinstance(c, int):
            c = self.ctx(c)
        base = self if c.ctx.m <= self.ctx.m else self.to_field(c.ctx)
        c = embed(c, base.ctx)
        vals = {g: tuple(x * c for x in v) for g, v in base.values.items()}
        return PeriodicFunction(self.quotient, base.ctx, vals, self.n)

    def map(self, fn: Callable[[FieldElement], FieldElement], ctx: FieldContext | None = None):
        vals = {g: tuple(fn(x) for x in v) for g, v in self.values.items()}
        return PeriodicFunction(self.quotient, ctx or self.ctx, vals, self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PeriodicFunction):
            return NotImplemented
        if other.n != self.n or other.rank != self.rank:
            return False
        if other.ctx.m % self.ctx.m and self.ctx.m % other.ctx.m:
            return False
        ctx = self.ctx if self.ctx.m >= other.ctx.m else other.ctx
        a, b = self.to_field(ctx), other.to_field(ctx)
        if other.sublattice == self.sublattice:
            return a.values == b.values
        # equal as functions: compare on a common period
        return all(a.vector(r) == b.vector(r) for r in intersect(self.sublattice, other.sublattice).residues())

    __hash__ = None

    def __repr__(self) -> str:
        vals = self.on_residues()
        if self.n == 1:
            body = ", ".join(format_element(x) for x in vals)
        else:
            body = ", ".join("(" + ", ".join(format_element(x) for x in v) + ")" for v in vals)
        return f"PeriodicFunction[{self.sublattice}]({body})"


class DualFunction:
    """A finitely supported function on the torus with vector values (zero values dropped)."""

    __slots__ = ("ctx", "n", "values")

    def __init__(self, ctx: FieldContext, values: Mapping[TorusPoint, Sequence[FieldElement]], n: int = 1):
        self.ctx = ctx
        self.n = n
        clean = {}
        for z, v in values.items():
            if isinstance(v, FieldElement):
                v = (v,)
            v = tuple(v)
            if len(v) != n:
                raise GroupAlgebraError("value length differs from n")
            if any(not x.is_zero() for x in v):
                clean[z] = v
        self.values = clean

    def support(self) -> list[TorusPoint]:
        return sorted(self.values, key=TorusPoint.sort_key)

    def __getitem__(self, z: TorusPoint):
        v = self.values.get(z)
        if v is None:
            v = (self.ctx.zero,) * self.n
        return v[0] if self.n == 1 else v

    def __eq__(self, other) -> bool:
        if not isinstance(other, DualFunction):
            return NotImplemented
        return self.n == other.n and self.values == other.values

    __hash__ = None

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        return f"DualFunction({ {z: self.values[z] for z in self.support()} })"


# --- operations --------------------------------------------------------------------------


def shift(f, v: Sequence[int]):
    """Translate: ``shift(f, v)(u) = f(u + v)``."""
    v = _vec(v)
    if isinstance(f, GroupAlgebraElement):
        return f._like(((tuple(x - y for x, y in zip(lam, v)), c) for lam, c in f.terms.items()))
    if isinstance(f, PeriodicFunction):
        q = f.quotient
        pv = q.project(v)
        return PeriodicFunction(q, f.ctx, {g: f.values[q.add(g, pv)] for g in q.elements()}, f.n)
    raise TypeError(f"cannot shift {type(f).__name__}")


def convolve_periodic(entries: Sequence[Sequence[GroupAlgebraElement]], f: PeriodicFunction) -> PeriodicFunction:
    """Apply the matrix of convolutions ``entries`` to a vector periodic function."""
    n = len(entries)
    if f.n != (len(entries[0]) if entries else 0):
        raise GroupAlgebraError("operator width differs from the function dimension")
    q = f.quotient
    ctx = f.ctx
    for row in entries:
        for a in row:
            if a.rank != q.rank:
                raise GroupAlgebraError("rank mismatch between operator and function")
            if ctx.m % a.ctx.m:
                ctx = build_field(ctx.p, math.lcm(ctx.m, a.ctx.m))
    f = f.to_field(ctx)
    # push each entry forward to the quotient once
    pushed = [[[(q.project(v), embed(c, ctx)) for v, c in a.terms.items()] for a in row] for row in entries]
    out = {}
    for g in q.elements():
        vec = []
        for i in range(n):
            acc = ctx.zero
            for j, terms in enumerate(pushed[i]):
                for pv, c in terms:
                    x = f.values[q.sub(g, pv)][j]
                    if not x.is_zero():
                        acc = acc + c * x
            vec.append(acc)
        out[g] = tuple(vec)
    return PeriodicFunction(q, ctx, out, n)


def apply_convolution(a: GroupAlgebraElement, f: PeriodicFunction) -> PeriodicFunction:
    """``(a * f)(lam) = sum_v a(v) f(lam - v)`` for a scalar periodic ``f``."""
    if f.n != 1:
        raise GroupAlgebraError("apply_convolution acts on scalar functions; use a matrix operator")
    return convolve_periodic([[a]], f)


def pushforward(a: GroupAlgebraElement, q: QuotientData | Sublattice) -> PeriodicFunction:
    """``a_*(g) = sum of a(v) over v with pi(v) = g``."""
    if isinstance(q, Sublattice):
        q = quotient(q)
    if a.rank != q.rank:
        raise GroupAlgebraError("rank mismatch")
    vals = {g: a.ctx.zero for g in q.elements()}
    for v, c in a.terms.items():
        g = q.project(v)
        vals[g] = vals[g] + c
    return PeriodicFunction(q, a.ctx, vals)


def character_function(z: TorusPoint, sub: Sublattice | QuotientData, u: Sequence[FieldElement] | None = None) -> PeriodicFunction:
    """The elementary function ``lam -> z^lam * u`` (``u`` defaults to the scalar 1)."""
    q = sub if isinstance(sub, QuotientData) else quotient(sub)
    for col in q.sublattice.columns:
        if not evaluate_character(z, col).is_one():
            raise LatticeError(f"{z!r} is not trivial on the period lattice")
    ctx = z.ctx
    if u is None:
        return PeriodicFunction(q, ctx, {g: (evaluate_character(z, q.lift(g)),) for g in q.elements()})
    u = [embed(x, ctx) for x in u]
    vals = {}
    for g in q.elements():
        c = evaluate_character(z, q.lift(g))
        vals[g] = tuple(c * x for x in u)
    return PeriodicFunction(q, ctx, vals, len(u))


def _dft_field(f: PeriodicFunction, field: FieldContext | None) -> FieldContext:
    base = dual_field(f.sublattice, f.ctx.p, f.ctx.m)
    if field is None:
        return base
    if field.m % base.m:
        raise FieldError(f"{field!r} does not contain {base!r}")
    return field


def dft_forward(f: PeriodicFunction, field: FieldContext | None = None) -> DualFunction:
    """Expand ``f = sum_chi alpha(chi) chi`` and record ``alpha(chi)`` at ``chi^-1``."""
    q = f.quotient
    require_p_saturated(q.sublattice, f.ctx.p)
    ctx = _dft_field(f, field)
    g_all = q.elements()
    f = f.to_field(ctx)
    inv_order = ctx(q.index).inverse()
    out = {}
    for chi in dual_subgroup(q.sublattice, ctx.p, ctx):
        acc = [ctx.zero] * f.n
        for g in g_all:
            w = evaluate_character(chi, q.lift(g)).inverse()
            for i, x in enumerate(f.values[g]):
                if not x.is_zero():
                    acc[i] = acc[i] + x * w
        out[chi.inverse()] = tuple(x * inv_order for x in acc)
    return DualFunction(ctx, out, f.n)


def dft_inverse(phi: DualFunction, q: QuotientData | Sublattice) -> PeriodicFunction:
    """``F^-1(phi) = sum_w phi(w) * (w^-1)`` evaluated on the quotient."""
    if isinstance(q, Sublattice):
        q = quotient(q)
    cols = q.sublattice.columns
    ctx = phi.ctx
    vals = {g: [ctx.zero] * phi.n for g in q.elements()}
    for w, v in phi.values.items():
        if w.rank != q.rank:
            raise GroupAlgebraError("rank mismatch")
        if any(not evaluate_character(w, c).is_one() for c in cols):
            raise LatticeError(f"{w!r} is not trivial on the period lattice")
        for g in vals:
            c = evaluate_character(w, q.lift(g)).inverse()
            acc = vals[g]
            for i, x in enumerate(v):
                acc[i] = acc[i] + x * c
    return PeriodicFunction(q, ctx, {g: tuple(v) for g, v in vals.items()}, phi.n)


def pointwise_product(a: GroupAlgebraElement, phi: DualFunction) -> DualFunction:
    """``w -> a^(w) phi(w)``: the Fourier side of convolution."""
    out = {}
    for w, v in phi.values.items():
        c = evaluate_laurent(fourier(a), w)
        out[w] = tuple(c * x for x in v)
    return DualFunction(phi.ctx, out, phi.n)
