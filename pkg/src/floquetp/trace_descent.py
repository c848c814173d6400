"""Descending periodic solutions to a subfield GF(q) by Frobenius traces.

If ``A`` has coefficients in GF(q) and ``z^lam u`` solves ``A * f = 0``, so does every
Frobenius conjugate, and the trace ``sum_k (z^lam u)^(q^k)`` is a GF(q)-valued solution.
Traces of ``gamma * z^lam u`` with ``gamma`` running over a GF(q)-basis of the field
generated by ``z`` and ``u`` span all GF(q)-valued solutions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field_tower import (
    FieldContext,
    FieldError,
    build_field,
    embed,
    restrict,
    trace_to_subfield,
    _prime_power_exponent,
)
from .group_algebra import PeriodicFunction, character_function
from .lattice_quotient import Sublattice, TorusPoint, dual_subgroup, quotient, require_p_saturated
from .matrix_spectral import MatrixOperator, coefficient_field, symbol_matrix
from . import linalg


class DescentError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DescentRequest:
    A: MatrixOperator
    q: int
    sub: Sublattice

    def __post_init__(self):
        p = self.A.ctx.p
        try:
            _prime_power_exponent(self.q, p)
        except FieldError as exc:
            raise DescentError(f"q = {self.q} is not a power of the characteristic {p}") from exc
        for row in self.A.entries:
            for a in row:
                for c in a.terms.values():
                    if c ** self.q != c:
                        raise DescentError(f"coefficient {c!r} does not lie in GF({self.q})")

    @property
    def degree(self) -> int:
        """Degree of GF(q) over the prime field."""
        return _prime_power_exponent(self.q, self.A.ctx.p)

    @property
    def target(self) -> FieldContext:
        return build_field(self.A.ctx.p, self.degree)


def frobenius_orbit_length(z: TorusPoint, q: int) -> int:
    """Least ``r >= 1`` with ``z^(q^r) = z`` coordinatewise."""
    _prime_power_exponent(q, z.ctx.p)
    r, w = 1, z ** q
    while w != z:
        w = w ** q
        r += 1
    return r


def trace_solution(f: PeriodicFunction, q: int, r: int, target: FieldContext | None = None) -> PeriodicFunction:
    """Pointwise trace from GF(q^r) to GF(q); values are expressed in ``target`` if given."""
    g = f.map(lambda x: trace_to_subfield(x, q, r))
    if target is None:
        return g
    return g.map(lambda x: restrict(x, target), target)


def _kernel_in_subfield(S: linalg.Matrix, sub_ctx: FieldContext) -> list[linalg.Vector]:
    """Kernel basis of ``S`` (entries in the subfield ``sub_ctx``) computed inside ``sub_ctx``."""
    small = [[restrict(x, sub_ctx) for x in row] for row in S]
    return linalg.kernel(small)


def _check_zero(A: MatrixOperator, f: PeriodicFunction) -> bool:
    return A.apply(f).is_zero()


def _descent_setup(req: DescentRequest):
    A = req.A
    require_p_saturated(req.sub, A.ctx.p)
    ctx = coefficient_field(A, req.sub, req.degree)
    points = dual_subgroup(req.sub, A.ctx.p, ctx)
    return ctx, points


def descend_kernel(req: DescentRequest) -> PeriodicFunction | None:
    """A nonzero GF(q)-valued periodic solution, or ``None`` if the periodic kernel is zero."""
    A, q = req.A, req.q
    ctx, points = _descent_setup(req)
    target = req.target
    p = A.ctx.p
    for z in points:
        S = symbol_matrix(A, z)
        if not linalg.determinant(S).is_zero():
            continue
        r = frobenius_orbit_length(z, q)
        sub_ctx = build_field(p, req.degree * r)
        for u in _kernel_in_subfield(S, sub_ctx):
            u = [embed(x, ctx) for x in u]
            elementary = character_function(z, req.sub, u)
            # a scalar multiple keeps the trace from vanishing when this one does
            for gamma in _subfield_basis(sub_ctx, ctx):
                f = trace_solution(elementary.scale(gamma), q, r, target)
                if not f.is_zero():
                    if not _check_zero(A, f):
                        raise AssertionError("descended function is not a solution")  # pragma: no cover
                    return f
    return None


def _subfield_basis(sub_ctx: FieldContext, ctx: FieldContext):
    """Powers of the generator of ``sub_ctx``, embedded in ``ctx``: a basis over the prime field."""
    g = embed(sub_ctx.gen, ctx)
    out, y = [], ctx.one
    for _ in range(sub_ctx.m):
        out.append(y)
        y = y * g
    return out


def gf_q_kernel_basis(req: DescentRequest) -> list[PeriodicFunction]:
    """A GF(q)-basis of the GF(q)-valued periodic solutions of ``A * f = 0``."""
    A, q = req.A, req.q
    ctx, points = _descent_setup(req)
    target = req.target
    p = A.ctx.p
    qd = quotient(req.sub)
    done: set[TorusPoint] = set()
    candidates: list[PeriodicFunction] = []
    for z in points:
        if z in done:
            continue
        r = frobenius_orbit_length(z, q)
        orbit, w = [], z
        for _ in range(r):
            orbit.append(w)
            w = w ** q
        done.update(orbit)
        S = symbol_matrix(A, z)
        if not linalg.determinant(S).is_zero():
            continue
        sub_ctx = build_field(p, req.degree * r)
        gammas = _subfield_basis(sub_ctx, ctx)
        for u in _kernel_in_subfield(S, sub_ctx):
            u = [embed(x, ctx) for x in u]
            elementary = character_function(z, req.sub, u)
            for gamma in gammas:
                candidates.append(trace_solution(elementary.scale(gamma), q, r, target))
    # reduce to a basis over GF(q)
    elements = qd.elements()
    rows = [[x for g in elements for x in f.values[g]] for f in candidates]
    basis: list[PeriodicFunction] = []
    span: list[list] = []
    for f, row in zip(candidates, rows):
        trial = span + [row]
        if linalg.span_rank(trial) > len(span):
            span = trial
            basis.append(f)
    return basis


def is_frobenius_fixed(f: PeriodicFunction, q: int) -> bool:
    return all(x ** q == x for v in f.values.values() for x in v)
