"""Spectra of scalar convolution operators on periodic functions.

Every character ``z`` trivial on the period lattice is an eigenfunction of
``f -> a * f`` with eigenvalue ``a^(z^-1)``, so the whole spectral picture on a
finite quotient is read off by evaluating the symbol at the dual points.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .field_tower import FieldContext, FieldElement, embed
from .group_algebra import (
    GroupAlgebraElement,
    PeriodicFunction,
    character_function,
    evaluate_laurent,
    fourier,
)
from .lattice_quotient import Sublattice, TorusPoint, dual_field, dual_subgroup, require_p_saturated


def _points(a: GroupAlgebraElement, sub: Sublattice, *degrees: int) -> list[TorusPoint]:
    require_p_saturated(sub, a.ctx.p)
    return dual_subgroup(sub, a.ctx.p, dual_field(sub, a.ctx.p, a.ctx.m, *degrees))


def symbol_at_inverse(a: GroupAlgebraElement, z: TorusPoint) -> FieldElement:
    return evaluate_laurent(fourier(a), z.inverse())


def symbolic_variety_points(a: GroupAlgebraElement, sub: Sublattice) -> list[TorusPoint]:
    """Characters ``z`` trivial on ``sub`` with ``a^(z^-1) = 0``."""
    return [z for z in _points(a, sub) if symbol_at_inverse(a, z).is_zero()]


def harmonic_kernel(a: GroupAlgebraElement, sub: Sublattice) -> list[PeriodicFunction]:
    """Basis of the ``sub``-periodic solutions of ``a * f = 0`` made of characters."""
    return [character_function(z, sub) for z in symbolic_variety_points(a, sub)]


def fermi_level_points(a: GroupAlgebraElement, mu: FieldElement, sub: Sublattice) -> list[TorusPoint]:
    """Characters at level ``mu``, i.e. the symbolic variety of ``a - mu delta_0``."""
    pts = _points(a, sub, mu.ctx.m)
    if not pts:
        return []
    mu = embed(mu, pts[0].ctx)
    shifted = a.to_field(pts[0].ctx) - GroupAlgebraElement.delta(pts[0].ctx, (0,) * a.rank, mu)
    return [z for z in pts if symbol_at_inverse(shifted, z).is_zero()]


@dataclass(eq=False)
class ScalarSpectralReport:
    operator: GroupAlgebraElement
    sublattice: Sublattice
    field: FieldContext
    eigenpairs: dict[FieldElement, list[TorusPoint]]

    @property
    def levels(self) -> list[FieldElement]:
        return sorted(self.eigenpairs, key=FieldElement.sort_key)

    def dimensions(self) -> dict[FieldElement, int]:
        return {mu: len(zs) for mu, zs in self.eigenpairs.items()}

    @property
    def kernel_basis(self) -> list[PeriodicFunction]:
        zero = self.field.zero
        return [character_function(z, self.sublattice) for z in self.eigenpairs.get(zero, [])]


def eigendecompose(a: GroupAlgebraElement, sub: Sublattice) -> ScalarSpectralReport:
    pts = _points(a, sub)
    ctx = pts[0].ctx
    levels: dict[FieldElement, list[TorusPoint]] = {}
    for z in pts:
        levels.setdefault(symbol_at_inverse(a, z), []).append(z)
    return ScalarSpectralReport(a, sub, ctx, levels)


class SpectrumKind(Enum):
    POINT = "point"
    TORUS = "torus"
    FULL_FIELD = "full_field"


@dataclass(frozen=True)
class SpectrumClass:
    kind: SpectrumKind
    value: FieldElement | None = None


def classify_spectrum(a: GroupAlgebraElement) -> SpectrumClass:
    """Spectrum over the algebraic closure: one point, the multiplicative group, or everything."""
    if a.is_monomial():
        (lam, c), = a.terms.items()
        if all(x == 0 for x in lam):
            return SpectrumClass(SpectrumKind.POINT, c)
        return SpectrumClass(SpectrumKind.TORUS)
    if a.is_zero():
        return SpectrumClass(SpectrumKind.POINT, a.ctx.zero)
    return SpectrumClass(SpectrumKind.FULL_FIELD)


def is_invertible(a: GroupAlgebraElement) -> bool:
    return a.is_monomial()


def finite_support_harmonic_exists(a: GroupAlgebraElement) -> bool:
    """A nonzero finitely supported solution of ``a * f = 0`` exists only for ``a = 0``."""
    return a.is_zero()
