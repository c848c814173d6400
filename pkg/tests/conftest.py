from __future__ import annotations

import random

import pytest

from floquetp.field_tower import build_field
from floquetp.group_algebra import GroupAlgebraElement
from floquetp.lattice_quotient import Sublattice, index
from floquetp.matrix_spectral import MatrixOperator


def element(ctx, terms):
    """Group algebra element from ``{lam: int coefficient}``; scalar lam may be an int."""
    items = []
    for lam, c in terms.items():
        lam = (lam,) if isinstance(lam, int) else tuple(lam)
        items.append((lam, c))
    rank = len(items[0][0]) if items else 1
    return GroupAlgebraElement(ctx, rank, items)


def three_term(p):
    return element(build_field(p), {-1: 1, 0: 1, 1: 1})


def random_sublattice(rng, s, p, max_index):
    """A random full-rank sublattice of Z^s with index <= max_index coprime to p."""
    while True:
        if s == 1:
            rows = [[rng.randint(1, max_index)]]
        else:
            a = rng.randint(1, max_index)
            d = rng.randint(1, max(1, max_index // a))
            rows = [[a, rng.randint(-3, 3)], [0, d]]
            if rng.random() < 0.5:
                rows = [[rows[0][0], 0], [rng.randint(-3, 3), rows[1][1]]]
        sub = Sublattice.from_generators(rows)
        if index(sub) <= max_index and index(sub) % p:
            return sub


def random_element(rng, ctx, s, box=2, terms=3):
    items = []
    for _ in range(rng.randint(0, terms)):
        lam = tuple(rng.randint(-box, box) for _ in range(s))
        items.append((lam, ctx.from_code(rng.randrange(ctx.order))))
    return GroupAlgebraElement(ctx, s, items)


def random_operator(rng, ctx, s, n, box=2, terms=2, density=0.7):
    zero = GroupAlgebraElement.zero(ctx, s)
    rows = [[random_element(rng, ctx, s, box, terms) if rng.random() < density else zero
             for _ in range(n)] for _ in range(n)]
    return MatrixOperator(ctx, s, rows)


@pytest.fixture
def rng():
    return random.Random(20240611)


# acceptance criteria report one line each; printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    def record(number: int, ok: bool, detail: str):
        detail = detail.removesuffix(" []")
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
