"""Sparse bivariate polynomials over a finite field, for symbolic checks."""

from __future__ import annotations

from typing import Iterable

from .gf import FieldElement, FiniteField
from .linpoly import LinearizedPoly


class Poly2:
    """sum c[(i, j)] X^i Y^j with zero coefficients dropped."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FiniteField, terms: dict[tuple[int, int], FieldElement] | None = None):
        self.field = field
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c: FieldElement) -> Poly2:
        return cls(c.field, {(0, 0): c})

    @classmethod
    def x(cls, F: FiniteField) -> Poly2:
        return cls(F, {(1, 0): F.one()})

    @classmethod
    def y(cls, F: FiniteField) -> Poly2:
        return cls(F, {(0, 1): F.one()})

    def __add__(self, other: Poly2) -> Poly2:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Poly2(self.field, out)

    def __neg__(self) -> Poly2:
        return Poly2(self.field, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: Poly2) -> Poly2:
        return self + (-other)

    def __mul__(self, other: Poly2 | FieldElement) -> Poly2:
        if isinstance(other, FieldElement):
            return Poly2(self.field, {k: v * other for k, v in self.terms.items()})
        out: dict[tuple[int, int], FieldElement] = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in other.terms.items():
                k = (i1 + i2, j1 + j2)
                prod = a * b
                out[k] = out[k] + prod if k in out else prod
        return Poly2(self.field, out)

    def __pow__(self, e: int) -> Poly2:
        result = Poly2.const(self.field.one())
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly2) and (self - other).is_zero()

    __hash__ = None

    def monomials(self) -> list[tuple[int, int]]:
        return sorted(self.terms)

    def coeff(self, i: int, j: int) -> FieldElement:
        return self.terms.get((i, j), self.field.zero())

    def first_difference(self, other: Poly2) -> tuple[tuple[int, int], FieldElement, FieldElement] | None:
        """(monomial, self coeff, other coeff) at the least differing monomial."""
        for k in sorted(set(self.terms) | set(other.terms)):
            a, b = self.coeff(*k), other.coeff(*k)
            if a != b:
                return k, a, b
        return None

    def __repr__(self) -> str:
        parts = []
        for (i, j) in sorted(self.terms, reverse=True):
            c = self.terms[(i, j)]
            mono = "*".join(s for s in (f"X^{i}" if i else "", f"Y^{j}" if j else "") if s)
            parts.append(f"({c}){'*' + mono if mono else ''}")
        return " + ".join(parts) or "0"


def linear_form(F: FiniteField, a: FieldElement, b: FieldElement, e: FieldElement) -> Poly2:
    """a*X + b*Y + e."""
    return Poly2(F, {(1, 0): a, (0, 1): b, (0, 0): e})


def lin_substitute(L: LinearizedPoly, a: FieldElement, b: FieldElement, e: FieldElement) -> Poly2:
    """L(aX + bY + e) expanded through additivity and GF(p)-Frobenius.

    L(aX + bY + e) = sum_i c_i (a^Q X^Q + b^Q Y^Q) + L(e) with Q = q̄^i.
    """
    F = a.field
    L = L.over(F)
    terms: dict[tuple[int, int], FieldElement] = {}
    for Q, c in L.exponents():
        if a:
            terms[(Q, 0)] = terms.get((Q, 0), F.zero()) + c * a**Q
        if b:
            terms[(0, Q)] = terms.get((0, Q), F.zero()) + c * b**Q
    const = L(e)
    if const:
        terms[(0, 0)] = const
    return Poly2(F, terms)


def lin_expand(L: LinearizedPoly, arg: Poly2) -> Poly2:
    """L(arg) by honest powering, no linearity assumed."""
    F = arg.field
    L = L.over(F)
    out = Poly2(F)
    for Q, c in L.exponents():
        out = out + (arg**Q) * c
    return out


def univariate(F: FiniteField, coeffs: Iterable[FieldElement | int]) -> Poly2:
    """sum coeffs[i] X^i."""
    return Poly2(F, {(i, 0): F(c) for i, c in enumerate(coeffs)})
