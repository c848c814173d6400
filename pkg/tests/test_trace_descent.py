from __future__ import annotations

import pytest

from conftest import element, three_term, random_operator, random_sublattice
from floquetp.field_tower import build_field, format_element
from floquetp.group_algebra import GroupAlgebraElement, PeriodicFunction
from floquetp.lattice_quotient import TorusPoint, parse_sublattice
from floquetp.matrix_spectral import MatrixOperator, periodic_solutions
from floquetp.oracle import build_quotient_matrix, nullity
from floquetp.trace_descent import (
    DescentError,
    DescentRequest,
    descend_kernel,
    frobenius_orbit_length,
    gf_q_kernel_basis,
    is_frobenius_fixed,
    trace_solution,
)

F2, F4 = build_field(2), build_field(2, 2)
SUB3 = parse_sublattice("3")
THREE_TERM_SHIFTS = {("0", "1", "1"), ("1", "0", "1"), ("1", "1", "0")}


def _pattern(f):
    return tuple(format_element(x) for x in f.on_residues())


def test_frobenius_orbit_length():
    w = F4.gen
    assert frobenius_orbit_length(TorusPoint([F4.one]), 2) == 1
    assert frobenius_orbit_length(TorusPoint([w]), 2) == 2
    assert frobenius_orbit_length(TorusPoint([w]), 4) == 1
    G = build_field(3, 2)
    assert frobenius_orbit_length(TorusPoint([G(2), G.gen]), 3) == 2


def test_trace_solution_examples():
    w = F4.gen
    f = PeriodicFunction.from_residues(SUB3, F4, [F4.one, w ** -1, w])
    assert _pattern(trace_solution(f, 2, 2, F2)) == ("0", "1", "1")
    g = PeriodicFunction.from_residues(SUB3, F2, [1, 0, 1])
    assert trace_solution(g, 2, 1) == g
    z = PeriodicFunction.zero(SUB3, F4)
    assert trace_solution(z, 2, 2).is_zero()


def test_trace_is_frobenius_fixed(rng):
    G = build_field(3, 4)
    sub = parse_sublattice("2,1;0,2")
    for _ in range(10):
        f = PeriodicFunction.from_residues(sub, G, [G.from_code(rng.randrange(G.order)) for _ in range(4)])
        for q, r in ((3, 4), (9, 2)):
            assert is_frobenius_fixed(trace_solution(f, q, r), q)


def test_request_validation():
    A = MatrixOperator.from_scalar(element(F4, {0: 1}) + GroupAlgebraElement.delta(F4, (1,), F4.gen))
    with pytest.raises(DescentError):
        DescentRequest(A, 2, SUB3)
    with pytest.raises(DescentError):
        DescentRequest(A, 3, SUB3)
    DescentRequest(A, 4, SUB3)


def test_descend_three_term():
    f = descend_kernel(DescentRequest(MatrixOperator.from_scalar(three_term(2)), 2, SUB3))
    assert f is not None and not f.is_zero()
    assert f.ctx.m == 1
    assert _pattern(f) in THREE_TERM_SHIFTS
    assert MatrixOperator.from_scalar(three_term(2)).apply(f).is_zero()


def test_descend_empty_kernel():
    req = DescentRequest(MatrixOperator.identity(F2, 1, 2), 2, SUB3)
    assert descend_kernel(req) is None
    assert gf_q_kernel_basis(req) == []


def test_descend_rational_multiplier():
    # delta_0 + delta_1 over GF(3) vanishes at z = -1, already in GF(3)
    F3 = build_field(3)
    A = MatrixOperator.from_scalar(element(F3, {0: 1, 1: 1}))
    sub = parse_sublattice("2")
    f = descend_kernel(DescentRequest(A, 3, sub))
    # a nonzero multiple of the elementary solution (-1)^lam
    assert f is not None and not f((0,)).is_zero()
    assert f((1,)) == -f((0,))


def test_gf_q_basis_three_term():
    basis = gf_q_kernel_basis(DescentRequest(MatrixOperator.from_scalar(three_term(2)), 2, SUB3))
    assert len(basis) == 2
    assert all(_pattern(f) in THREE_TERM_SHIFTS for f in basis)
    assert _pattern(basis[0]) != _pattern(basis[1])


def test_gf_q_basis_matches_oracle(rng):
    for q in (2, 3, 4):
        ctx = build_field(2, 2) if q == 4 else build_field(q)
        for _ in range(5):
            s = rng.randint(1, 2)
            sub = random_sublattice(rng, s, ctx.p, 9)
            A = random_operator(rng, ctx, s, rng.randint(1, 2))
            req = DescentRequest(A, q, sub)
            basis = gf_q_kernel_basis(req)
            assert len(basis) == nullity(build_quotient_matrix(A, sub))
            assert len(basis) == len(periodic_solutions(A, sub))
            for f in basis:
                assert is_frobenius_fixed(f, q)
                assert A.apply(f).is_zero()
