"""q̄-linearized polynomials L(T) = sum_i a_i T^(q̄^i).

Such an L induces a GF(p)-linear (indeed GF(q̄)-linear) map on every field
containing its coefficients, so evaluation over a whole field is a single
matrix product and the root space is a null space.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import InconsistencyError, InseparableError, ParameterError
from .gf import (
    FieldElement,
    FiniteField,
    all_coords,
    embed,
    frobenius_matrix,
    left_nullspace_mod_p,
    make_field,
    mul_matrix,
    solve_left_mod_p,
    span_mod_p,
    to_index,
)


@dataclass(frozen=True)
class LinearizedPoly:
    """sum_i coeffs[i] * T^(p^(n*i)) with coefficients in ``coeff_field``."""

    n: int
    coeff_field: FiniteField
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("n must be >= 1")
        if not self.coeffs or not self.coeffs[-1]:
            raise ParameterError("leading coefficient a_m must be nonzero")
        if any(c.field != self.coeff_field for c in self.coeffs):
            raise ParameterError("coefficients must lie in coeff_field")

    @property
    def p(self) -> int:
        return self.coeff_field.p

    @property
    def qbar(self) -> int:
        return self.p**self.n

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return self.qbar**self.m

    @property
    def is_separable(self) -> bool:
        return bool(self.coeffs[0])

    def __call__(self, x: FieldElement) -> FieldElement:
        return evaluate(self, x)

    def __repr__(self) -> str:
        terms = []
        for i, a in reversed(list(enumerate(self.coeffs))):
            if a:
                e = self.qbar**i
                mono = "T" if e == 1 else f"T^{e}"
                terms.append(mono if a == 1 else f"({a}){mono}")
        return " + ".join(terms)

    def over(self, F: FiniteField) -> LinearizedPoly:
        """The same polynomial with coefficients pushed into F."""
        if F == self.coeff_field:
            return self
        e = embed(self.coeff_field, F)
        return LinearizedPoly(self.n, F, tuple(e(a) for a in self.coeffs))

    def monic(self) -> LinearizedPoly:
        lead = self.coeffs[-1].inverse()
        return LinearizedPoly(self.n, self.coeff_field, tuple(a * lead for a in self.coeffs))

    def scaled(self, c: FieldElement) -> LinearizedPoly:
        return LinearizedPoly(self.n, self.coeff_field, tuple(a * c for a in self.coeffs))

    def as_p_linearized(self) -> LinearizedPoly:
        """Re-index as a p-linearized polynomial (base q̄ = p)."""
        if self.n == 1:
            return self
        F = self.coeff_field
        coeffs = [F.zero()] * (self.n * self.m + 1)
        for i, a in enumerate(self.coeffs):
            coeffs[self.n * i] = a
        return LinearizedPoly(1, F, tuple(coeffs))

    def exponents(self) -> list[tuple[int, FieldElement]]:
        """(T-exponent, coefficient) pairs of the nonzero terms."""
        return [(self.qbar**i, a) for i, a in enumerate(self.coeffs) if a]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "coeff_field": self.coeff_field.to_dict(),
            "coeffs": [a.to_list() for a in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> LinearizedPoly:
        F = FiniteField.from_dict(data["coeff_field"])
        if int(data.get("p", F.p)) != F.p:
            raise ParameterError("p does not match coeff_field")
        return cls(int(data["n"]), F, tuple(F(c) for c in data["coeffs"]))


def linpoly(F: FiniteField, coeffs: Sequence[int | Sequence[int] | FieldElement], n: int = 1) -> LinearizedPoly:
    """Convenience constructor: ``linpoly(GF3, [-1, 1])`` is T^3 - T."""
    return LinearizedPoly(n, F, tuple(F(c) for c in coeffs))


def evaluate(L: LinearizedPoly, x: FieldElement) -> FieldElement:
    """sum a_i x^(q̄^i) with the running power advanced by Frobenius^n."""
    if x.field != L.coeff_field:
        if x.field.p != L.p or x.field.d % L.coeff_field.d:
            raise ParameterError(f"{x.field} does not contain the coefficients of L ({L.coeff_field})")
        L = L.over(x.field)
    acc = x.field.zero()
    power = x
    for i, a in enumerate(L.coeffs):
        if i:
            power = power ** L.qbar
        if a:
            acc = acc + a * power
    return acc


def classify_linearity(L: LinearizedPoly) -> int:
    """Largest k such that L is q̄^k-linearized (gcd of nonzero term indices)."""
    k = 0
    for i, a in enumerate(L.coeffs):
        if a:
            k = math.gcd(k, i)
    return k if k else 1


def matrix(L: LinearizedPoly, F: FiniteField) -> np.ndarray:
    """GF(p)-matrix M with coords(L(x)) = coords(x) @ M for x in F."""
    return _matrix(L.over(F), F)


@functools.lru_cache(maxsize=512)
def _matrix(L: LinearizedPoly, F: FiniteField) -> np.ndarray:
    p = F.p
    frob = frobenius_matrix(F)
    step = np.eye(F.d, dtype=np.int64)
    for _ in range(L.n):
        step = (step @ frob) % p
    out = np.zeros((F.d, F.d), dtype=np.int64)
    power = np.eye(F.d, dtype=np.int64)
    for i, a in enumerate(L.coeffs):
        if i:
            power = (power @ step) % p
        if a:
            out = (out + power @ mul_matrix(a)) % p
    out.setflags(write=False)
    return out


def values(L: LinearizedPoly, F: FiniteField) -> np.ndarray:
    """Index array v with v[i] = index of L(element i), over all of F."""
    return to_index(F, all_coords(F) @ matrix(L, F))


def solve(L: LinearizedPoly, c: FieldElement) -> FieldElement | None:
    """One y in c's field with L(y) = c, or None."""
    F = c.field
    sol = solve_left_mod_p(matrix(L, F), np.array(c.coeffs), F.p)
    return None if sol is None else F(sol)


# --------------------------------------------------------------------------
# kernels
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelSpace:
    """All roots of a separable L inside ``ambient``."""

    poly: LinearizedPoly
    ambient: FiniteField
    roots: tuple[FieldElement, ...]
    basis: tuple[tuple[int, ...], ...]  # GF(p)-basis, as coordinate vectors

    @property
    def dimension(self) -> int:
        """Dimension over GF(q̄)."""
        return len(self.basis) // self.poly.n

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self) -> Iterator[FieldElement]:
        return iter(self.roots)

    def __contains__(self, x: FieldElement) -> bool:
        return x in self._rootset

    @functools.cached_property
    def _rootset(self) -> frozenset:
        return frozenset(self.roots)


def kernel_in(L: LinearizedPoly, F: FiniteField) -> KernelSpace:
    """Roots of L lying in F (possibly fewer than deg L)."""
    if not L.is_separable:
        raise InseparableError(f"{L} is inseparable (a_0 = 0)")
    basis = left_nullspace_mod_p(matrix(L, F), F.p)
    if len(basis) > L.n * L.m:
        raise InconsistencyError(f"kernel of {L} in {F} has GF(p)-dimension {len(basis)} > {L.n * L.m}")
    vecs = span_mod_p(basis, F.p) if basis else [(0,) * F.d]
    roots = tuple(sorted((F(v) for v in vecs), key=lambda r: r.index))
    return KernelSpace(L, F, roots, tuple(tuple(int(c) for c in b) for b in basis))


def splitting_degree(L: LinearizedPoly, limit: int = 128) -> int:
    """Least D, a multiple of lcm(n*m, deg coeff field), whose field holds all roots.

    The true splitting degree need not be a multiple of n*m (T^27 + 2T^3 + T
    splits over GF(3^26)), so the answer can be larger than necessary; here 78.
    """
    if not L.is_separable:
        raise InseparableError(f"{L} is inseparable (a_0 = 0)")
    base = math.lcm(L.n * L.m, L.coeff_field.d)
    D = base
    while D <= limit:
        F = make_field(L.p, D, 0)
        if len(left_nullspace_mod_p(matrix(L, F), F.p)) == L.n * L.m:
            return D
        D += base
    raise InconsistencyError(f"no splitting field for {L} up to degree {limit}")


def kernel(L: LinearizedPoly, ambient: FiniteField | None = None) -> KernelSpace:
    """All q̄^m roots of a separable L.

    Without ``ambient`` the field GF(p^D) is found by trying D = base,
    2*base, ... until the null space has full dimension.
    """
    if ambient is None:
        ambient = make_field(L.p, splitting_degree(L), 0)
    ks = kernel_in(L, ambient)
    if len(ks.basis) != L.n * L.m:
        raise ParameterError(
            f"{ambient} is too small to contain the kernel of {L}; "
            f"need GF({L.p}^{splitting_degree(L)}) or an extension of it"
        )
    return ks


# --------------------------------------------------------------------------
# algebra
# --------------------------------------------------------------------------


def _common_field(A: FiniteField, B: FiniteField) -> FiniteField:
    if A.p != B.p:
        raise ParameterError("different characteristics")
    if A.d % B.d == 0:
        return A
    if B.d % A.d == 0:
        return B
    return make_field(A.p, math.lcm(A.d, B.d), 0)


def compose(L: LinearizedPoly, M: LinearizedPoly) -> LinearizedPoly:
    """L o M: c_k = sum_{i+j=k} a_i * b_j^(q̄^i)."""
    if L.p != M.p or L.n != M.n:
        raise ParameterError("composition needs the same q̄")
    F = _common_field(L.coeff_field, M.coeff_field)
    a, b = L.over(F).coeffs, M.over(F).coeffs
    out = [F.zero()] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj ** (L.qbar**i)
    return LinearizedPoly(L.n, F, tuple(out))


def random_separable(
    qbar_field: FiniteField, m: int, seed: int, coeff_field: FiniteField | None = None
) -> LinearizedPoly:
    """Seeded draw of a_0..a_m with a_0, a_m != 0 (re-drawn until both hold)."""
    if m < 1:
        raise ParameterError("m must be >= 1")
    F = coeff_field or qbar_field
    if F.p != qbar_field.p:
        raise ParameterError("coefficient field has the wrong characteristic")
    rng = random.Random(seed)
    while True:
        coeffs = [F.from_index(rng.randrange(F.order)) for _ in range(m + 1)]
        if coeffs[0] and coeffs[-1]:
            return LinearizedPoly(qbar_field.d, F, tuple(coeffs))
