from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floquetp.field_tower import (
    FieldError,
    FieldMismatchError,
    build_field,
    embed,
    format_element,
    frobenius,
    minimal_subfield_degree,
    multiplicative_order,
    nth_roots_of_unity,
    parse_element,
    poly_roots,
    primitive_root_of_unity,
    restrict,
    roots_by_scan,
    roots_of_unity,
    trace_to_subfield,
)

FIELDS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)]


def test_canonical_moduli():
    assert build_field(2, 2).modulus == (1, 1, 1)
    assert build_field(3, 2).modulus == (1, 0, 1)
    assert build_field(2, 1).modulus == (1, 1)
    assert build_field(2, 3).modulus == (1, 0, 1, 1)


def test_build_field_is_cached():
    assert build_field(5, 2) is build_field(5, 2)
    assert build_field(5, 2) is not build_field(5, 1)


def test_gf4_arithmetic():
    F = build_field(2, 2)
    w = F.gen
    assert w * w == w + 1
    assert w ** 3 == F.one
    assert multiplicative_order(w) == 3
    assert (w + w).is_zero()
    assert w.inverse() == w + 1


def test_elements_enumerated_in_order():
    F = build_field(3, 2)
    els = list(F.elements())
    assert len(els) == 9
    assert [e.sort_key() for e in els] == sorted(e.sort_key() for e in els)
    assert len(set(els)) == 9


@pytest.mark.parametrize("p,m", FIELDS)
def test_field_axioms_exhaustive(p, m):
    F = build_field(p, m)
    els = list(F.elements())
    for a in els[:12]:
        for b in els[:12]:
            assert a + b == b + a
            assert a * b == b * a
            if not b.is_zero():
                assert (a / b) * b == a
    nonzero = [x for x in els if not x.is_zero()]
    assert all(x ** (F.order - 1) == F.one for x in nonzero)


def test_prime_field_values_coerce_across_fields():
    F, G = build_field(2, 2), build_field(2, 3)
    assert F.one == G.one
    assert F.gen + 1 == F.gen + F.one
    with pytest.raises(FieldMismatchError):
        F.gen + G.gen


def test_zero_power_errors():
    F = build_field(3)
    with pytest.raises(ZeroDivisionError):
        F.zero ** -1


def test_primitive_roots_have_exact_order():
    F = build_field(2, 4)
    for n in (1, 3, 5, 15):
        assert multiplicative_order(primitive_root_of_unity(F, n)) == n
    with pytest.raises(FieldError):
        primitive_root_of_unity(F, 7)


def test_nth_roots_of_unity():
    ctx, roots = nth_roots_of_unity(5, 3)
    assert (ctx.p, ctx.m) == (3, 4)
    assert len(roots) == 5 and len(set(roots)) == 5
    assert all(r ** 5 == ctx.one for r in roots)
    ctx, roots = nth_roots_of_unity(3, 2)
    assert (ctx.p, ctx.m) == (2, 2)
    with pytest.raises(FieldError):
        nth_roots_of_unity(6, 3)


def test_roots_of_unity_sorted():
    F = build_field(7)
    assert [format_element(x) for x in roots_of_unity(F, 3)] == ["1", "2", "4"]


def test_trace_and_frobenius():
    F = build_field(2, 2)
    w = F.gen
    assert trace_to_subfield(w, 2, 2) == F.one
    assert trace_to_subfield(F.one, 2, 2).is_zero()
    assert frobenius(w, 2) == w * w
    with pytest.raises(FieldError):
        frobenius(w, 3)
    with pytest.raises(FieldError):
        trace_to_subfield(build_field(2, 3).gen, 2, 2)


def test_minimal_subfield_degree():
    F = build_field(2, 4)
    assert minimal_subfield_degree(F.one) == 1
    assert minimal_subfield_degree(primitive_root_of_unity(F, 3)) == 2
    assert minimal_subfield_degree(primitive_root_of_unity(F, 5)) == 4


@pytest.mark.parametrize("p,m", FIELDS)
def test_poly_roots_against_scan(p, m):
    F = build_field(p, m)
    els = list(F.elements())
    for k in range(0, min(len(els), 9)):
        for j in range(0, min(len(els), 5)):
            coeffs = [els[k], els[j], F.one]
            assert poly_roots(coeffs, F) == roots_by_scan(coeffs, F)
    coeffs = [F.one, F.zero, F.one * 2 if p > 2 else F.one, F.one]
    assert poly_roots(coeffs, F) == roots_by_scan(coeffs, F)


def test_poly_roots_with_multiplicity():
    F = build_field(3)
    # (x - 1)^2 (x - 2) = x^3 - 4x^2 + 5x - 2
    roots = poly_roots([F(-2), F(5), F(-4), F(1)], F)
    assert [format_element(r) for r in roots] == ["1", "1", "2"]
    with pytest.raises(FieldError):
        poly_roots([F.zero], F)


def test_cube_roots_in_gf4():
    F = build_field(2, 2)
    roots = poly_roots([F.one, F.one, F.one], F)
    assert [format_element(r) for r in roots] == ["[0,1]", "[1,1]"]


@pytest.mark.parametrize("small,big", [((2, 2), (2, 4)), ((2, 2), (2, 6)), ((3, 2), (3, 4)), ((2, 3), (2, 6)), ((5, 1), (5, 3))])
def test_embed_is_a_homomorphism_and_restrict_inverts(small, big):
    S, B = build_field(*small), build_field(*big)
    els = list(S.elements())
    for a in els:
        assert restrict(embed(a, B), S) == a
        for b in els[:6]:
            assert embed(a * b, B) == embed(a, B) * embed(b, B)
            assert embed(a + b, B) == embed(a, B) + embed(b, B)
    with pytest.raises(FieldError):
        restrict(B.gen, S) if B.m > S.m else embed(B.gen, S)


def test_embed_rejects_incompatible_degree():
    with pytest.raises(FieldError):
        embed(build_field(2, 2).gen, build_field(2, 3))


def test_parse_and_format_roundtrip():
    F = build_field(3, 2)
    for x in F.elements():
        assert parse_element(format_element(x), F) == x
    assert parse_element("g^2", F) == F.gen ** 2
    assert parse_element("-g^1", F) == -F.gen
    assert parse_element("g", F) == F.gen
    for bad in ("[0,1,2]", "[3,0]", "x", "[a]"):
        with pytest.raises(FieldError):
            parse_element(bad, F)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(-20, 20))
def test_power_laws(field, a, b, k):
    F = build_field(*field)
    x = F.from_code(a % F.order)
    y = F.from_code(b % F.order)
    if not x.is_zero() and not y.is_zero():
        assert (x * y) ** k == x ** k * y ** k
        assert x ** k * x ** -k == F.one
    assert frobenius(x + y, F.p) == frobenius(x, F.p) + frobenius(y, F.p)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2), (5, 3)])
def test_modulus_is_first_rootless_polynomial(p, m):
    # for degree <= 3, irreducible is the same as having no root in GF(p)
    import itertools

    def rootless(low):
        coeffs = list(low) + [1]
        return all(sum(c * x**i for i, c in enumerate(coeffs)) % p for x in range(p))

    expected = next(tuple(low) + (1,) for low in itertools.product(range(p), repeat=m)
                    if low[0] != 0 and rootless(low))
    assert build_field(p, m).modulus == expected


def test_large_degree_fields_build_quickly():
    # the scan starts at constant term 1, so high degrees do not wade through c0 = 0
    for p, m in ((5, 22), (2, 36), (3, 22)):
        F = build_field(p, m)
        assert F.modulus[0] == 1 and len(F.modulus) == m + 1
