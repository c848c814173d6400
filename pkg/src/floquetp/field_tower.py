"""Finite fields GF(p^m) in a polynomial basis, with explicit embeddings.

Every field is presented as GF(p)[x]/(f) where f is the lexicographically
smallest monic irreducible polynomial of degree m with nonzero constant term
(coefficients compared low degree first).  The same (p, m) always returns the
same :class:`FieldContext` object, so contexts can be compared with ``is``.

Arithmetic is delegated to FLINT through python-flint; everything that gives
the fields their structure here (modulus choice, embeddings, roots of unity,
Frobenius traces) is computed in this module.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from collections.abc import Iterable, Iterator, Sequence

import flint


class FieldError(ValueError):
    """Invalid field construction or element outside the expected field."""


class FieldMismatchError(FieldError):
    """Operands live in fields with no declared embedding between them."""


def is_prime(n: int) -> bool:
    return n >= 2 and bool(flint.fmpz(n).is_prime())


def prime_factors(n: int) -> list[int]:
    if n == 1:
        return []
    return [int(r) for r, _ in flint.fmpz(n).factor()]


def multiplicative_order_mod(a: int, n: int) -> int:
    """Order of ``a`` in (Z/nZ)^x; ``n == 1`` gives 1."""
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise FieldError(f"{a} is not invertible modulo {n}")
    k, x = 1, a % n
    while x != 1:
        x = (x * a) % n
        k += 1
    return k


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    ring = flint.fmpz_mod_poly_ctx(p)
    # lexicographic on (c0, ..., c_{m-1}) with c0 != 0; product() varies the last slot fastest
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=m - 1):
            coeffs = [c0, *rest, 1]
            if ring(coeffs).is_irreducible():
                return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


class FieldContext:
    """The field GF(p^m) with a fixed polynomial basis 1, g, ..., g^(m-1)."""

    __slots__ = ("p", "m", "modulus", "order", "_fq", "_ring", "_embeddings",
                 "_restrictions", "_group_factors", "_roots_of_unity", "__weakref__")

    def __init__(self, p: int, m: int, modulus: tuple[int, ...]):
        self.p = p
        self.m = m
        self.modulus = modulus
        self.order = p**m
        self._fq = flint.fq_default_ctx(modulus=flint.fmpz_mod_poly_ctx(p)(list(modulus)))
        self._ring = None
        self._embeddings: dict[int, list] = {}
        self._restrictions: dict[int, tuple] = {}
        self._group_factors: list[int] | None = None
        self._roots_of_unity: dict[int, FieldElement] = {}

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __reduce__(self):
        return build_field, (self.p, self.m)

    # construction of elements

    def _wrap(self, value) -> FieldElement:
        el = object.__new__(FieldElement)
        el.ctx = self
        el._v = value
        return el

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            return coerce(value, self)
        if isinstance(value, int):
            return self._wrap(self._fq(value % self.p))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.m:
            raise FieldError(f"{len(coeffs)} coordinates given for {self!r}")
        return self._wrap(self._fq(coeffs))

    def from_code(self, code: int) -> FieldElement:
        """Element whose base-p digits (low first) are its coordinates."""
        digits = []
        for _ in range(self.m):
            code, c = divmod(code, self.p)
            digits.append(c)
        return self(digits)

    @property
    def zero(self) -> FieldElement:
        return self._wrap(self._fq(0))

    @property
    def one(self) -> FieldElement:
        return self._wrap(self._fq(1))

    @property
    def gen(self) -> FieldElement:
        return self._wrap(self._fq.gen())

    def elements(self) -> Iterator[FieldElement]:
        """All elements in sort order (lexicographic coordinates, low degree first)."""
        for coeffs in itertools.product(range(self.p), repeat=self.m):
            yield self(coeffs)

    @property
    def poly_ring(self):
        if self._ring is None:
            self._ring = flint.fq_default_poly_ctx(self._fq)
        return self._ring

    def group_order_factors(self) -> list[int]:
        if self._group_factors is None:
            self._group_factors = prime_factors(self.order - 1)
        return self._group_factors

    def is_subfield_degree(self, k: int) -> bool:
        return self.m % k == 0


class FieldElement:
    """An element of a :class:`FieldContext`; immutable and hashable."""

    __slots__ = ("ctx", "_v")

    ctx: FieldContext

    @property
    def coeffs(self) -> tuple[int, ...]:
        lst = [int(c) for c in self._v.to_list()]
        return tuple(lst + [0] * (self.ctx.m - len(lst)))

    def sort_key(self) -> tuple[int, ...]:
        return self.coeffs

    @property
    def code(self) -> int:
        return sum(c * self.ctx.p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return self._v.is_zero()

    def is_one(self) -> bool:
        return self._v.is_one()

    def __bool__(self) -> bool:
        return not self._v.is_zero()

    def in_prime_field(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    # arithmetic

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is self.ctx:
                return self.ctx, self._v, other._v
            ctx = common_context(self.ctx, other.ctx)
            return ctx, coerce(self, ctx)._v, coerce(other, ctx)._v
        if isinstance(other, int):
            return self.ctx, self._v, self.ctx._fq(other % self.ctx.p)
        return None

    def __add__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        return t[0]._wrap(t[1] + t[2])

    __radd__ = __add__

    def __sub__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        return t[0]._wrap(t[1] - t[2])

    def __rsub__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        return t[0]._wrap(t[2] - t[1])

    def __mul__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        return t[0]._wrap(t[1] * t[2])

    __rmul__ = __mul__

    def __truediv__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        if t[2].is_zero():
            raise ZeroDivisionError("division by zero in " + repr(t[0]))
        return t[0]._wrap(t[1] / t[2])

    def __rtruediv__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        if t[1].is_zero():
            raise ZeroDivisionError("division by zero in " + repr(t[0]))
        return t[0]._wrap(t[2] / t[1])

    def __neg__(self):
        return self.ctx._wrap(-self._v)

    def __pow__(self, k: int):
        if k < 0:
            if self._v.is_zero():
                raise ZeroDivisionError("zero has no inverse")
            return self.ctx._wrap(self._v.inverse() ** (-k))
        return self.ctx._wrap(self._v**k)

    def inverse(self) -> FieldElement:
        return self**-1

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            if other.ctx is self.ctx:
                return self._v == other._v
            if other.ctx.p != self.ctx.p:
                return False
            if self.in_prime_field() and other.in_prime_field():
                return self.coeffs[0] == other.coeffs[0]
            try:
                t = self._other(other)
            except FieldMismatchError:
                return False
            return t[1] == t[2]
        if isinstance(other, int):
            return self._v == self.ctx._fq(other % self.ctx.p)
        return NotImplemented

    def __hash__(self) -> int:
        c = self.coeffs
        if all(x == 0 for x in c[1:]):
            return hash((self.ctx.p, c[0]))
        return hash((self.ctx.p, self.ctx.m, c))

    def __repr__(self) -> str:
        return format_element(self)


# --- coercion between contexts ---------------------------------------------


def common_context(a: FieldContext, b: FieldContext) -> FieldContext:
    """The context that operands from ``a`` and ``b`` are combined in.

    Only the prime field coerces implicitly; anything else needs :func:`embed`.
    """
    if a is b:
        return a
    if a.p != b.p:
        raise FieldMismatchError(f"characteristics differ: {a!r} vs {b!r}")
    if a.m == 1:
        return b
    if b.m == 1:
        return a
    raise FieldMismatchError(f"no implicit embedding between {a!r} and {b!r}")


def coerce(x: FieldElement, ctx: FieldContext) -> FieldElement:
    if x.ctx is ctx:
        return x
    if x.ctx.p != ctx.p:
        raise FieldMismatchError(f"characteristics differ: {x.ctx!r} vs {ctx!r}")
    if x.in_prime_field():
        return ctx._wrap(ctx._fq(x.coeffs[0]))
    raise FieldMismatchError(f"{x!r} does not coerce from {x.ctx!r} into {ctx!r}")


# --- construction ------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def build_field(p: int, m: int = 1) -> FieldContext:
    """GF(p^m) with the lexicographically smallest admissible modulus."""
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"characteristic must be prime, got {p!r}")
    if not isinstance(m, int) or m < 1:
        raise FieldError(f"extension degree must be >= 1, got {m!r}")
    return FieldContext(p, m, _smallest_irreducible(p, m))


def _prime_power_exponent(q: int, p: int) -> int:
    if q < p:
        raise FieldError(f"{q} is not a power of {p}")
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    if q != 1:
        raise FieldError(f"not a power of {p}")
    return k


def frobenius(x: FieldElement, q: int) -> FieldElement:
    """x^q for a power q of the characteristic."""
    _prime_power_exponent(q, x.ctx.p)
    return x**q


def multiplicative_order(x: FieldElement) -> int:
    if x.is_zero():
        raise FieldError("zero has no multiplicative order")
    order = x.ctx.order - 1
    for r in x.ctx.group_order_factors():
        while order % r == 0 and (x ** (order // r)).is_one():
            order //= r
    return order


def minimal_subfield_degree(x: FieldElement) -> int:
    """Degree over GF(p) of the smallest subfield containing ``x``."""
    p = x.ctx.p
    for r in range(1, x.ctx.m + 1):
        if x.ctx.m % r == 0 and x ** (p**r) == x:
            return r
    raise AssertionError("unreachable")  # pragma: no cover


def primitive_root_of_unity(ctx: FieldContext, n: int) -> FieldElement:
    """A deterministic element of exact multiplicative order ``n``."""
    if (ctx.order - 1) % n:
        raise FieldError(f"{ctx!r} has no primitive {n}-th roots of unity")
    cached = ctx._roots_of_unity.get(n)
    if cached is not None:
        return cached
    if n == 1:
        root = ctx.one
    else:
        cofactor = (ctx.order - 1) // n
        primes = prime_factors(n)
        for code in range(1, ctx.order):
            y = ctx.from_code(code) ** cofactor
            if all(not (y ** (n // r)).is_one() for r in primes):
                root = y
                break
    ctx._roots_of_unity[n] = root
    return root


def roots_of_unity(ctx: FieldContext, n: int) -> list[FieldElement]:
    """All n-th roots of unity of ``ctx``, sorted by coordinates."""
    zeta = primitive_root_of_unity(ctx, n)
    out, y = [], ctx.one
    for _ in range(n):
        out.append(y)
        y = y * zeta
    return sorted(out, key=FieldElement.sort_key)


def nth_roots_of_unity(n: int, p: int) -> tuple[FieldContext, list[FieldElement]]:
    """The smallest field GF(p^d) holding all n-th roots of unity, and those roots."""
    if n < 1:
        raise FieldError("n must be positive")
    if n % p == 0:
        raise FieldError(f"p={p} divides n={n}: only {n // p**_vp(n, p)} distinct roots exist")
    ctx = build_field(p, multiplicative_order_mod(p, n))
    return ctx, roots_of_unity(ctx, n)


def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def trace_to_subfield(x: FieldElement, q: int, r: int) -> FieldElement:
    """x + x^q + ... + x^(q^(r-1)) for x in GF(q^r)."""
    _prime_power_exponent(q, x.ctx.p)
    if r < 1:
        raise FieldError("r must be positive")
    if x ** (q**r) != x:
        raise FieldError(f"{x!r} does not lie in GF({q}^{r})")
    total, y = x.ctx.zero, x
    for _ in range(r):
        total = total + y
        y = y**q
    return total


# --- polynomials ---------------------------------------------------------------


def _lift_all(coeffs: Sequence, ctx: FieldContext) -> list[FieldElement]:
    out = []
    for c in coeffs:
        if isinstance(c, int):
            out.append(ctx(c))
        elif c.ctx is ctx or c.in_prime_field():
            out.append(coerce(c, ctx))
        else:
            out.append(embed(c, ctx))
    return out


def to_flint_poly(coeffs: Sequence, ctx: FieldContext):
    """Low-degree-first coefficients as a FLINT polynomial over ``ctx``."""
    return ctx.poly_ring([c._v for c in _lift_all(coeffs, ctx)])


def poly_roots(coeffs: Sequence, search_field: FieldContext) -> list[FieldElement]:
    """Roots in ``search_field`` repeated by multiplicity, in sort order.

    Coefficients are low degree first; those from subfields are embedded.
    """
    lifted = _lift_all(coeffs, search_field)
    if all(c.is_zero() for c in lifted):
        raise FieldError("the zero polynomial has every element as a root")
    poly = search_field.poly_ring([c._v for c in lifted])
    if poly.degree() < 1:
        return []
    roots = []
    for r, mult in poly.roots():
        roots.extend([search_field._wrap(r)] * int(mult))
    return sorted(roots, key=FieldElement.sort_key)


def roots_by_scan(coeffs: Sequence, search_field: FieldContext) -> list[FieldElement]:
    """Roots by evaluating at every element; intended for small fields and checks."""
    lifted = _lift_all(coeffs, search_field)
    if all(c.is_zero() for c in lifted):
        raise FieldError("the zero polynomial has every element as a root")
    out = []
    for x in search_field.elements():
        poly = lifted
        mult = 0
        while len(poly) > 1:
            acc, quotient = search_field.zero, []
            for c in reversed(poly):
                acc = acc * x + c
                quotient.append(acc)
            if not acc.is_zero():
                break
            mult += 1
            poly = list(reversed(quotient[:-1]))
        out.extend([x] * mult)
    return out


def evaluate_poly(coeffs: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    acc = x.ctx.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# --- embeddings ------------------------------------------------------------------


def _generator_powers(source: FieldContext, target: FieldContext) -> list:
    powers = target._embeddings.get(source.m)
    if powers is None:
        if source.p != target.p or target.m % source.m:
            raise FieldError(f"{source!r} does not embed into {target!r}")
        images = poly_roots([target(c) for c in source.modulus], target)
        gamma = min(images, key=FieldElement.sort_key)
        powers, y = [], target._fq(1)
        for _ in range(source.m):
            powers.append(y)
            y = y * gamma._v
        target._embeddings[source.m] = powers
    return powers


def embed(x: FieldElement, target: FieldContext) -> FieldElement:
    """Image of ``x`` under the embedding sending the source generator to the
    smallest root of the source modulus in ``target``."""
    source = x.ctx
    if source is target:
        return x
    if source.p != target.p or target.m % source.m:
        raise FieldError(f"{source!r} does not embed into {target!r}")
    if x.in_prime_field():
        return coerce(x, target)
    powers = _generator_powers(source, target)
    acc = target._fq(0)
    for c, g in zip(x.coeffs, powers):
        if c:
            acc = acc + g * c
    return target._wrap(acc)


def restrict(x: FieldElement, sub: FieldContext) -> FieldElement:
    """Inverse of :func:`embed`: express ``x`` in the coordinates of ``sub``."""
    big = x.ctx
    if big is sub:
        return x
    if sub.p != big.p or big.m % sub.m:
        raise FieldError(f"{sub!r} is not a subfield of {big!r}")
    data = big._restrictions.get(sub.m)
    if data is None:
        powers = [big._wrap(g).coeffs for g in _generator_powers(sub, big)]
        # choose sub.m coordinate rows on which the generator powers are independent
        p = big.p
        rows, chosen = [], []
        for i in range(big.m):
            cand = rows + [[powers[j][i] for j in range(sub.m)]]
            if flint.nmod_mat(cand, p).rank() == len(cand):
                rows = cand
                chosen.append(i)
            if len(rows) == sub.m:
                break
        inv = flint.nmod_mat(rows, p).inv()
        data = (chosen, inv)
        big._restrictions[sub.m] = data
    chosen, inv = data
    c = x.coeffs
    rhs = flint.nmod_mat([[c[i]] for i in chosen], big.p)
    sol = inv * rhs
    y = sub([int(sol[i, 0]) for i in range(sub.m)])
    if embed(y, big) != x:
        raise FieldError(f"{x!r} does not lie in the subfield {sub!r}")
    return y


# --- text syntax -------------------------------------------------------------------


def format_element(x: FieldElement) -> str:
    c = x.coeffs
    if all(v == 0 for v in c[1:]):
        return str(c[0])
    return "[" + ",".join(str(v) for v in c) + "]"


_POWER = re.compile(r"^(-?)g\^(-?\d+)$")


def parse_element(text: str, ctx: FieldContext) -> FieldElement:
    """Parse ``"3"``, ``"[c0,c1,...]"`` or ``"g^k"`` (optionally ``"-g^k"``)."""
    s = str(text).strip()
    m = _POWER.match(s)
    if m:
        y = ctx.gen ** int(m.group(2))
        return -y if m.group(1) else y
    if s == "g":
        return ctx.gen
    if s.startswith("[") and s.endswith("]"):
        body = s[1:-1].strip()
        try:
            coeffs = [int(t) for t in body.split(",")] if body else []
        except ValueError as exc:
            raise FieldError(f"malformed field literal {text!r}") from exc
        if len(coeffs) > ctx.m:
            raise FieldError(f"{text!r} has more than {ctx.m} coordinates")
        if any(not 0 <= c < ctx.p for c in coeffs):
            raise FieldError(f"coordinates of {text!r} must lie in [0, {ctx.p})")
        return ctx(coeffs)
    try:
        v = int(s)
    except ValueError as exc:
        raise FieldError(f"malformed field literal {text!r}") from exc
    return ctx(v)


def lcm_degree(*degrees: int) -> int:
    return math.lcm(*degrees) if degrees else 1


def field_containing(p: int, degrees: Iterable[int]) -> FieldContext:
    return build_field(p, lcm_degree(*degrees))
