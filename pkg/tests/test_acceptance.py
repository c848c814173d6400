"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

All arithmetic is exact; random instances use the fixed seeds printed in each line.
"""

from __future__ import annotations

import random
import time

import pytest

from conftest import element, three_term, random_operator, random_sublattice
from floquetp import linalg
from floquetp.field_tower import build_field, multiplicative_order_mod, poly_roots, primitive_root_of_unity
from floquetp.fragmentation import fragment_operator, fragmentation_map
from floquetp.group_algebra import (
    GroupAlgebraElement,
    LaurentPoly,
    PeriodicFunction,
    apply_convolution,
    dft_forward,
    pointwise_product,
    shift_element,
)
from floquetp.lattice_quotient import Sublattice, TorusPoint, dual_subgroup, index, parse_sublattice
from floquetp.matrix_spectral import (
    MatrixOperator,
    apply_to_finite,
    count_multipliers,
    det_symbol,
    finite_support_solution,
    jordan_basis,
    periodic_solutions,
    symbol_matrix,
)
from floquetp.oracle import build_quotient_matrix, nullity, oracle_spectrum
from floquetp.scalar_spectral import harmonic_kernel, symbolic_variety_points
from floquetp.trace_descent import DescentRequest, descend_kernel, gf_q_kernel_basis, is_frobenius_fixed

pytestmark = pytest.mark.acceptance


def roots_field(p, N):
    """The smallest field of characteristic p holding the N-th roots of unity."""
    return build_field(p, multiplicative_order_mod(p, N))


def fragmented_shift(ctx, n):
    """The fragmented shift tau, tau(delta_k) = delta_(k+1), on nZ."""
    return fragment_operator(shift_element(ctx, (-1,)), fragmentation_map(Sublattice.scaled(1, n)))


def test_criterion_1_three_term_kernel(acceptance):
    start = time.perf_counter()
    problems = []
    for p in (2, 5):
        a = three_term(p)
        sub = Sublattice.scaled(1, 3)
        basis = harmonic_kernel(a, sub)
        pts = symbolic_variety_points(a, sub)
        if len(basis) != 2:
            problems.append(f"p={p}: dimension {len(basis)}")
        if sorted(z.order for z in pts) != [3, 3]:
            problems.append(f"p={p}: character orders {[z.order for z in pts]}")
        if any(not apply_convolution(a, h).is_zero() for h in basis):
            problems.append(f"p={p}: basis element is not harmonic")
        if nullity(build_quotient_matrix(MatrixOperator.from_scalar(a), sub)) != 2:
            problems.append(f"p={p}: oracle nullity differs")
    elapsed = time.perf_counter() - start
    if elapsed >= 1.0:
        problems.append(f"runtime {elapsed:.3f}s")
    acceptance(1, not problems, f"three_term kernel dim 2 with order-3 characters, p in (2, 5); {elapsed:.3f}s {problems}")


def _char_poly_symbolic(A: MatrixOperator) -> LaurentPoly:
    """det(x I - A^(z)) as a Laurent polynomial in (z, x), exponents (z-degree, x-degree)."""
    ctx, n = A.ctx, A.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = GroupAlgebraElement(ctx, 2, {(lam[0], 0): -c for lam, c in A.entries[i][j].terms.items()})
            if i == j:
                e = e + GroupAlgebraElement.delta(ctx, (0, 1))
            row.append(e)
        rows.append(row)
    return det_symbol(MatrixOperator(ctx, 2, rows))


def test_criterion_2_fragmented_shift(acceptance):
    start = time.perf_counter()
    problems = []
    checked = 0
    for p in (2, 3, 5, 7):
        ctx = build_field(p)
        for n in range(2, 7):
            if n % p == 0:
                continue
            A = fragmented_shift(ctx, n)
            expected = GroupAlgebraElement(ctx, 2, {(0, n): 1, (1, 0): -1})
            if _char_poly_symbolic(A) != expected:
                problems.append(f"p={p} n={n}: characteristic polynomial is not x^n - z")
            for m in range(1, 21):
                if m % p == 0:
                    continue
                sub = Sublattice.scaled(1, m)
                # a field holding every n-th root of every m-th root of unity
                big = roots_field(p, n * m)
                for z in dual_subgroup(sub, p, big):
                    c = z.coords[0]
                    xis = poly_roots([-c] + [big.zero] * (n - 1) + [big.one], big)
                    if len(set(xis)) != n:
                        problems.append(f"p={p} n={n} z={c!r}: roots not distinct")
                        continue
                    S = symbol_matrix(A, z)
                    for xi in xis:
                        v = [xi ** i for i in range(n)]
                        if linalg.matvec(S, v) != [xi.inverse() * x for x in v]:
                            problems.append(f"p={p} n={n} m={m}: eigen relation fails")
                    checked += 1
    elapsed = time.perf_counter() - start
    acceptance(2, not problems, f"det(xI - A^(z)) = x^n - z and A^(z^-1) v_i = xi_i^-1 v_i at {checked} points; "
                                f"{elapsed:.2f}s {problems[:3]}")


def test_criterion_3_grid_shifts(acceptance):
    start = time.perf_counter()
    p = 3
    ctx = build_field(p)
    fmap = fragmentation_map(parse_sublattice("2", 2))
    A1 = fragment_operator(shift_element(ctx, (-1, 0)), fmap)
    A2 = fragment_operator(shift_element(ctx, (0, -1)), fmap)
    problems = []
    checked = 0
    for text in ("1,0;0,1", "2,0;0,2", "4,0;0,1", "2,1;0,4", "5,0;0,2", "4,0;0,4"):
        sub = parse_sublattice(text)
        big = roots_field(p, 2 * index(sub) * 2)
        for z in dual_subgroup(sub, p, big):
            z1, z2 = z.coords
            S1, S2 = symbol_matrix(A1, z), symbol_matrix(A2, z)
            o, l, a, b = big.zero, big.one, z1.inverse(), z2.inverse()
            if S1 != [[o, a, o, o], [l, o, o, o], [o, o, o, a], [o, o, l, o]]:
                problems.append(f"{text}: first matrix differs at {z!r}")
            if S2 != [[o, o, b, o], [o, o, o, b], [l, o, o, o], [o, l, o, o]]:
                problems.append(f"{text}: second matrix differs at {z!r}")
            x = poly_roots([-z1, o, l], big)[0]
            y = poly_roots([-z2, o, l], big)[0]
            vs = [[l, x, y, x * y], [-l, x, -y, x * y], [-l, -x, y, x * y], [l, -x, -y, x * y]]
            P = [[vs[j][i] for j in range(4)] for i in range(4)]
            Pi = linalg.inverse(P)
            D1 = linalg.matmul(Pi, linalg.matmul(S1, P))
            D2 = linalg.matmul(Pi, linalg.matmul(S2, P))
            xi, yi = x.inverse(), y.inverse()
            diag1, diag2 = [xi, -xi, xi, -xi], [yi, yi, -yi, -yi]
            for D, diag in ((D1, diag1), (D2, diag2)):
                want = linalg.zeros(big, 4, 4)
                for k in range(4):
                    want[k][k] = diag[k]
                if D != want:
                    problems.append(f"{text}: diagonalisation fails at {z!r}")
            checked += 1
        # the library's own Jordan data: eigenvalues +-x^-1, each semisimple of multiplicity 2
        rep = jordan_basis(A1, sub)
        for pt in rep.points:
            roots = {e.mu for e in pt.eigen}
            if any(e.blocks != [1, 1] for e in pt.eigen) or any(mu * mu != pt.z.coords[0].inverse() for mu in roots):
                problems.append(f"{text}: jordan data differs at {pt.z!r}")
    elapsed = time.perf_counter() - start
    acceptance(3, not problems, f"grid_shift matrices and simultaneous diagonalisation at {checked} points, p=3; "
                                f"{elapsed:.2f}s {problems[:3]}")


def test_criterion_4_convolution_theorem(acceptance):
    seed = 4001
    rng = random.Random(seed)
    start = time.perf_counter()
    problems = []
    for k in range(200):
        p = rng.choice((2, 3, 5))
        ctx = build_field(p)
        s = rng.randint(1, 2)
        sub = random_sublattice(rng, s, p, 24)
        terms = {tuple(rng.randint(-3, 3) for _ in range(s)): ctx.from_code(rng.randrange(p))
                 for _ in range(rng.randint(1, 4))}
        a = GroupAlgebraElement(ctx, s, terms)
        f = PeriodicFunction.from_residues(sub, ctx, [ctx.from_code(rng.randrange(p)) for _ in sub.residues()])
        if dft_forward(apply_convolution(a, f)) != pointwise_product(a, dft_forward(f)):
            problems.append(f"instance {k}")
    elapsed = time.perf_counter() - start
    if elapsed >= 30:
        problems.append(f"runtime {elapsed:.1f}s")
    acceptance(4, not problems, f"200 instances, seed {seed}; {elapsed:.2f}s {problems[:3]}")


def _criterion_5_instances(seed):
    rng = random.Random(seed)
    out = []
    for _ in range(100):
        p = rng.choice((2, 3, 5))
        ctx = build_field(p)
        s = rng.randint(1, 2)
        n = rng.randint(1, 3)
        sub = random_sublattice(rng, s, p, 18)
        A = random_operator(rng, ctx, s, n, box=2, terms=2)
        out.append((A, sub))
    return out


CRITERION_5_SEED = 5001
_C5: dict = {}


def _criterion_5_results():
    if not _C5:
        start = time.perf_counter()
        rows = []
        for A, sub in _criterion_5_instances(CRITERION_5_SEED):
            rep = jordan_basis(A, sub)
            M = build_quotient_matrix(A, sub)
            orc = oracle_spectrum(M, rep.field)
            rows.append((A, sub, rep, M, orc))
        _C5["rows"] = rows
        _C5["elapsed"] = time.perf_counter() - start
    return _C5["rows"], _C5["elapsed"]


def test_criterion_5_oracle_equivalence(acceptance):
    start = time.perf_counter()
    rows, _ = _criterion_5_results()
    problems = []
    for k, (A, sub, rep, M, orc) in enumerate(rows):
        if len(periodic_solutions(A, sub)) != nullity(M):
            problems.append(f"instance {k}: kernel dimension")
        if orc.field is not rep.field or orc.dimensions != rep.dimensions():
            problems.append(f"instance {k}: eigenspace dimensions")
        if orc.blocks != rep.block_multisets():
            problems.append(f"instance {k}: Jordan blocks")
    elapsed = time.perf_counter() - start
    if elapsed >= 60:
        problems.append(f"runtime {elapsed:.1f}s")
    acceptance(5, not problems, f"100 operators, seed {CRITERION_5_SEED}; {elapsed:.2f}s {problems[:3]}")


def test_criterion_6_decomposition_completeness(acceptance):
    rows, _ = _criterion_5_results()
    problems = [f"instance {k}" for k, (A, sub, rep, M, orc) in enumerate(rows)
                if sum(rep.dimensions().values()) != A.n * index(sub)
                or sum(orc.dimensions.values()) != A.n * index(sub)]
    acceptance(6, not problems, f"sum of dims = n * index on the 100 instances of criterion 5 {problems[:3]}")


def _nonzero_at_some_point(A: MatrixOperator) -> bool:
    """An independent witness that det A^ is not the zero Laurent polynomial."""
    p = A.ctx.p
    big = build_field(p, 6 * A.ctx.m)
    g = big.gen
    for k in range(1, 40):
        z = TorusPoint([g ** (k * (i + 1) + i) for i in range(A.rank)])
        if not linalg.determinant(symbol_matrix(A, z)).is_zero():
            return True
    return False


def test_criterion_7_determinant_criterion(acceptance):
    seed = 7001
    rng = random.Random(seed)
    problems = []
    singular = regular = 0
    for k in range(40):
        ctx = build_field(rng.choice((2, 3)), rng.choice((1, 2)))
        s = rng.randint(1, 2)
        n = rng.randint(2, 3)
        A = random_operator(rng, ctx, s, n, density=1.0)
        if k % 2 == 0:
            # dependent rows: the last row is a convolution combination of the others
            rows = [list(r) for r in A.entries]
            mults = [element(ctx, {tuple(rng.randint(-1, 1) for _ in range(s)): 1}) for _ in range(n - 1)]
            rows[-1] = [sum((m * rows[i][j] for i, m in enumerate(mults)), GroupAlgebraElement.zero(ctx, s))
                        for j in range(n)]
            A = MatrixOperator(ctx, s, rows)
            f = finite_support_solution(A)
            singular += 1
            if f is None or all(x.is_zero() for x in f):
                problems.append(f"instance {k}: no solution for a singular symbol")
            elif not all(x.is_zero() for x in apply_to_finite(A, f)):
                problems.append(f"instance {k}: returned f is not a solution")
        else:
            if not _nonzero_at_some_point(A):
                continue
            regular += 1
            if finite_support_solution(A) is not None:
                problems.append(f"instance {k}: solution returned for a nonzero determinant")
    # a fixed nonsingular family: unitriangular with monomial diagonal
    for n in (2, 3, 4):
        ctx = build_field(3)
        rows = [[GroupAlgebraElement.delta(ctx, (i,)) if i == j else
                 (element(ctx, {0: 1, 1: 2}) if j > i else GroupAlgebraElement.zero(ctx, 1))
                 for j in range(n)] for i in range(n)]
        regular += 1
        if finite_support_solution(MatrixOperator(ctx, 1, rows)) is not None:
            problems.append(f"triangular n={n}: solution returned")
    acceptance(7, not problems, f"{singular} singular and {regular} nonsingular operators, seed {seed} {problems[:3]}")


def test_criterion_8_trace_descent(acceptance):
    seed = 8001
    rng = random.Random(seed)
    start = time.perf_counter()
    problems = []
    nonzero = 0
    for k in range(50):
        q = rng.choice((2, 3, 4))
        ctx = build_field(2, 2) if q == 4 else build_field(q)
        s = rng.randint(1, 2)
        n = rng.randint(1, 2)
        sub = random_sublattice(rng, s, ctx.p, 12)
        A = random_operator(rng, ctx, s, n)
        if k % 2 and n == 2:
            # force a nonzero kernel with a repeated row
            A = MatrixOperator(ctx, s, [A.entries[0], A.entries[0]])
        expected = nullity(build_quotient_matrix(A, sub))
        req = DescentRequest(A, q, sub)
        f = descend_kernel(req)
        if expected == 0:
            if f is not None:
                problems.append(f"instance {k}: solution for a zero kernel")
        else:
            nonzero += 1
            if f is None or f.is_zero():
                problems.append(f"instance {k}: no descended solution")
            elif not A.apply(f).is_zero() or not is_frobenius_fixed(f, q):
                problems.append(f"instance {k}: descended f is not a GF({q}) solution")
        basis = gf_q_kernel_basis(req)
        if len(basis) != expected:
            problems.append(f"instance {k}: GF({q}) basis size {len(basis)} vs oracle {expected}")
    elapsed = time.perf_counter() - start
    acceptance(8, not problems, f"50 operators ({nonzero} with nonzero kernel), seed {seed}; "
                                f"{elapsed:.2f}s {problems[:3]}")


def test_criterion_9_counting_function(acceptance):
    a = three_term(2)
    A = MatrixOperator.from_scalar(a)
    problems = []
    for m in range(1, 51, 2):
        sub = Sublattice.scaled(1, m)
        got = count_multipliers(A, sub)
        want = 2 if m % 3 == 0 else 0
        # direct enumeration of the m-th roots of unity as powers of a primitive one
        zeta = primitive_root_of_unity(roots_field(2, m), m)
        direct = sum(1 for k in range(m) if (zeta ** k + zeta ** 0 + zeta ** -k).is_zero())
        oracle = nullity(build_quotient_matrix(A, sub))
        if not got == want == direct == oracle:
            problems.append(f"m={m}: count {got}, expected {want}, direct {direct}, oracle {oracle}")
    acceptance(9, not problems, f"odd m <= 50, count = 2 iff 3 | m {problems[:3]}")
