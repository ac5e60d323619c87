"""Generalized Artin-Mumford curves L1(X) L2(Y) = 1, place counts and zeta data.

Also hosts the formula engines shared with the quotient curves: the
Riemann-Hurwitz genus formula, the different of a ramification filtration,
Deuring-Shafarevich for p-ranks, and the Nakajima bound on Sylow p-subgroups.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Protocol, Sequence

import numpy as np

from .errors import DeskScaleLimit, InconsistencyError, InseparableError, ParameterError, ValidationError
from .gf import FiniteField, inverse_table, make_field
from .linpoly import (
    KernelSpace,
    LinearizedPoly,
    classify_linearity,
    kernel,
    kernel_in,
    random_separable,
    splitting_degree,
    values,
)

CURVE_FORMAT = "amcurves.curve/1"
DESK_SCALE_GENUS = 4

# --------------------------------------------------------------------------
# formula engines
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RamificationProfile:
    """Ramification of a Galois cover: ``places`` places, each with the
    orders |G_P^(0)|, |G_P^(1)|, ... of its lower ramification groups
    (trailing 1 included)."""

    group_order: int
    places: int
    filtration: tuple[int, ...]

    @property
    def ramification_index(self) -> int:
        return self.filtration[0]

    @property
    def different_exponent(self) -> int:
        return different_exponent(self.filtration)

    @property
    def different_sum(self) -> int:
        return self.places * self.different_exponent

    def higher_group_order(self, i: int) -> int:
        return self.filtration[i] if i < len(self.filtration) else 1


def different_exponent(filtration: Sequence[int]) -> int:
    """d_P = sum_{i >= 0} (|G_P^(i)| - 1)."""
    return sum(g - 1 for g in filtration)


def riemann_hurwitz(group_order: int, genus_bar: int, different_sum: int) -> int:
    """Genus g from 2g - 2 = |G| (2 gbar - 2) + sum_P d_P."""
    two_g_minus_2 = group_order * (2 * genus_bar - 2) + different_sum
    if two_g_minus_2 % 2:
        raise InconsistencyError(f"2g - 2 = {two_g_minus_2} is odd")
    g = two_g_minus_2 // 2 + 1
    if g < 0:
        raise InconsistencyError(f"negative genus {g}")
    return g


def deuring_shafarevich(group_order: int, gamma_bar: int, short_orbit_lengths: Sequence[int]) -> int:
    """p-rank gamma from gamma - 1 = |G| (gammabar - 1) + sum (|G| - l_i)."""
    for ell in short_orbit_lengths:
        if ell < 1 or group_order % ell:
            raise ParameterError(f"short orbit length {ell} does not divide |G| = {group_order}")
    return 1 + group_order * (gamma_bar - 1) + sum(group_order - ell for ell in short_orbit_lengths)


@dataclass(frozen=True)
class NakajimaCheck:
    sylow_order: int
    p: int
    genus: int
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.sylow_order <= self.bound

    @property
    def tight(self) -> bool:
        return self.sylow_order == self.bound


def nakajima_bound(sylow_order: int, p: int, genus: int) -> NakajimaCheck:
    """|H| <= p/(p-2) (g - 1) for a Sylow p-subgroup H of an ordinary curve."""
    return NakajimaCheck(sylow_order, p, genus, Fraction(p, p - 2) * (genus - 1))


# --------------------------------------------------------------------------
# curves
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AMCurve:
    """A validated member of the family L1(X) * L2(Y) = 1."""

    L1: LinearizedPoly
    L2: LinearizedPoly
    kernel1: KernelSpace
    kernel2: KernelSpace

    @property
    def p(self) -> int:
        return self.L1.p

    @property
    def n(self) -> int:
        return self.L1.n

    @property
    def m(self) -> int:
        return self.L1.m

    @property
    def tower(self) -> tuple[int, int, int]:
        return (self.p, self.n, self.m)

    @property
    def qbar(self) -> int:
        return self.L1.qbar

    @property
    def q(self) -> int:
        return self.L1.degree

    @property
    def count_field(self) -> FiniteField:
        return self.L1.coeff_field

    @property
    def ambient(self) -> FiniteField:
        return self.kernel1.ambient

    @property
    def regime(self) -> str:
        return "q = p" if self.q == self.p else "q > p"

    @property
    def diagonal(self) -> bool:
        """L1 = L2 after monic normalization."""
        return self.L1.monic() == self.L2.monic()

    def genus(self) -> int:
        return genus(self)

    def count_places(self, k: int) -> int:
        return rational_places(self, k)

    def in_field(self, F: FiniteField) -> AMCurve:
        """Same curve with coefficients and kernels inside F."""
        L1, L2 = self.L1.over(F), self.L2.over(F)
        return AMCurve(L1, L2, kernel(L1, F), kernel(L2, F))

    def rebase(self, F: FiniteField) -> AMCurve:
        """Same curve with F as its coefficient (counting) field."""
        return new_am_curve(self.L1.over(F), self.L2.over(F))

    def to_dict(self) -> dict:
        return {
            "format": CURVE_FORMAT,
            "kind": "am",
            "tower": {"p": self.p, "n": self.n, "m": self.m},
            "L1": self.L1.to_dict(),
            "L2": self.L2.to_dict(),
        }


def _unify(L1: LinearizedPoly, L2: LinearizedPoly) -> tuple[LinearizedPoly, LinearizedPoly]:
    A, B = L1.coeff_field, L2.coeff_field
    if A == B:
        return L1, L2
    if A.p != B.p:
        raise ValidationError("L1 and L2 live in different characteristics")
    if B.d % A.d == 0:
        return L1.over(B), L2
    if A.d % B.d == 0:
        return L1, L2.over(A)
    F = make_field(A.p, math.lcm(A.d, B.d), 0)
    return L1.over(F), L2.over(F)


def new_am_curve(L1: LinearizedPoly, L2: LinearizedPoly) -> AMCurve:
    """Validate (L1, L2) and precompute both kernels in a common field."""
    if L1.p != L2.p or L1.n != L2.n:
        raise ValidationError("L1 and L2 must be linearized over the same q̄")
    if L1.m != L2.m:
        raise ValidationError(f"degree mismatch: deg L1 = {L1.degree}, deg L2 = {L2.degree}")
    for name, L in (("L1", L1), ("L2", L2)):
        if not L.is_separable:
            raise InseparableError(f"{name} = {L} is inseparable (a_0 = 0)")
    k1, k2 = classify_linearity(L1), classify_linearity(L2)
    if math.gcd(k1, k2) > 1:
        raise ValidationError(
            f"L1 and L2 are both q̄^{math.gcd(k1, k2)}-linearized; "
            "at most one of them may be q̄^k-linearized for some k >= 2"
        )
    L1, L2 = _unify(L1, L2)
    D = math.lcm(splitting_degree(L1), splitting_degree(L2), L1.n, L1.coeff_field.d)
    F = make_field(L1.p, D, 0)
    return AMCurve(L1, L2, kernel(L1, F), kernel(L2, F))


def random_curve(p: int, n: int, m: int, seed: int) -> AMCurve:
    """Seeded random member with coefficients in GF(q), q = p^(n m)."""
    qbar_field = make_field(p, n, 0)
    coeff_field = make_field(p, n * m, 0)
    rng = random.Random(seed)
    while True:
        L1 = random_separable(qbar_field, m, rng.randrange(2**31), coeff_field)
        L2 = random_separable(qbar_field, m, rng.randrange(2**31), coeff_field)
        if math.gcd(classify_linearity(L1), classify_linearity(L2)) == 1:
            return new_am_curve(L1, L2)


def curve_from_dict(data: dict) -> AMCurve:
    if data.get("format") != CURVE_FORMAT or data.get("kind", "am") != "am":
        raise ParameterError(f"not an {CURVE_FORMAT} AM curve record")
    L1 = LinearizedPoly.from_dict(data["L1"])
    L2 = LinearizedPoly.from_dict(data["L2"])
    c = new_am_curve(L1, L2)
    tower = data.get("tower")
    if tower and (int(tower["p"]), int(tower["n"]), int(tower["m"])) != c.tower:
        raise ValidationError(f"tower {tower} does not match the polynomials {c.tower}")
    return c


# --------------------------------------------------------------------------
# genus
# --------------------------------------------------------------------------


def ramification_profile(c: AMCurve) -> RamificationProfile:
    """K(x, y) / K(x): the q zeros of L1 are totally ramified with
    G^(0) = G^(1) of order q and G^(2) trivial."""
    return RamificationProfile(group_order=c.q, places=len(c.kernel1), filtration=(c.q, c.q, 1))


def genus(c: AMCurve) -> int:
    prof = ramification_profile(c)
    g = riemann_hurwitz(prof.group_order, 0, prof.different_sum)
    if g != (c.q - 1) ** 2:
        raise InconsistencyError(f"Riemann-Hurwitz gave {g}, expected (q-1)^2 = {(c.q - 1) ** 2}")
    return g


def p_rank_formula(c: AMCurve) -> int:
    """Deuring-Shafarevich for Sigma with its two short orbits of length q."""
    return deuring_shafarevich(c.q**2, 0, [len(c.kernel1), len(c.kernel2)])


def nakajima(c: AMCurve) -> NakajimaCheck:
    return nakajima_bound(c.q**2, c.p, genus(c))


# --------------------------------------------------------------------------
# counting
# --------------------------------------------------------------------------


def extension_field(base: FiniteField, k: int) -> FiniteField:
    """GF(|base|^k) as used for counting (seed 0)."""
    if k < 1:
        raise ParameterError("extension degree must be >= 1")
    return make_field(base.p, base.d * k, 0)


def _affine_count_chunk(v1: np.ndarray, table: np.ndarray, inv: np.ndarray) -> int:
    v1 = v1[v1 != 0]
    return int(table[inv[v1]].sum())


def affine_count(L1: LinearizedPoly, L2: LinearizedPoly, F: FiniteField, workers: int = 1) -> int:
    """#{(x, y) in F^2 : L1(x) L2(y) = 1} from a value table of L2."""
    v1 = values(L1, F)
    table = np.bincount(values(L2, F), minlength=F.order)
    inv = inverse_table(F)
    if workers <= 1:
        return _affine_count_chunk(v1, table, inv)
    chunks = np.array_split(v1, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(lambda ch: _affine_count_chunk(ch, table, inv), chunks))


def affine_points(c: AMCurve, F: FiniteField) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (xs, ys) of all affine points over F."""
    v1 = values(c.L1, F)
    v2 = values(c.L2, F)
    inv = inverse_table(F)
    order = np.argsort(v2, kind="stable")
    sorted_v2 = v2[order]
    xs, ys = [], []
    for x in np.nonzero(v1)[0]:
        target = inv[v1[x]]
        lo, hi = np.searchsorted(sorted_v2, target, "left"), np.searchsorted(sorted_v2, target, "right")
        if hi > lo:
            xs.append(np.full(hi - lo, x, dtype=np.int64))
            ys.append(order[lo:hi])
    if not xs:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(xs), np.concatenate(ys).astype(np.int64)


def rational_places(c: AMCurve, k: int, workers: int = 1) -> int:
    """Places of degree one over GF(Q0^k), Q0 = |count field|.

    Affine points plus the infinite places P_{x=alpha} (alpha in ker L1) and
    P_{y=beta} (beta in ker L2) whose labels are rational.
    """
    F = extension_field(c.count_field, k)
    L1, L2 = c.L1.over(F), c.L2.over(F)
    affine = affine_count(L1, L2, F, workers)
    at_infinity = len(kernel_in(L1, F)) + len(kernel_in(L2, F))
    return affine + at_infinity


# --------------------------------------------------------------------------
# zeta
# --------------------------------------------------------------------------


class Countable(Protocol):
    count_field: FiniteField

    def genus(self) -> int: ...

    def count_places(self, k: int) -> int: ...


@dataclass(frozen=True)
class ZetaData:
    base_count_field: FiniteField
    counts: tuple[int, ...]  # N_1 .. N_2g
    l_poly: tuple[int, ...]  # c_0 .. c_2g
    reciprocal_root_moduli: tuple[float, ...] = field(default=())

    @property
    def q0(self) -> int:
        return self.base_count_field.order

    @property
    def genus(self) -> int:
        return (len(self.l_poly) - 1) // 2

    @property
    def p_rank(self) -> int:
        p = self.base_count_field.p
        nz = [i for i, c in enumerate(self.l_poly) if c % p]
        return max(nz) if nz else 0


def l_poly_from_counts(counts: Sequence[int], q0: int) -> list[int]:
    """Newton's identities: i c_i = sum_{j=1}^{i} s_j c_{i-j}, s_j = N_j - q0^j - 1."""
    s = [None] + [N - q0**j - 1 for j, N in enumerate(counts, start=1)]
    c = [Fraction(1)]
    for i in range(1, len(counts) + 1):
        c.append(sum(s[j] * c[i - j] for j in range(1, i + 1)) / i)
    if any(x.denominator != 1 for x in c):
        raise InconsistencyError(f"non-integral L-polynomial coefficients {c}")
    return [int(x) for x in c]


def check_functional_equation(l_poly: Sequence[int], q0: int) -> list[int]:
    """Indices i where c_{2g-i} != q0^(g-i) c_i."""
    g = (len(l_poly) - 1) // 2
    return [i for i in range(g + 1) if l_poly[2 * g - i] != q0 ** (g - i) * l_poly[i]]


def _squarefree_part(coeffs: Sequence[int]) -> list[Fraction]:
    """Squarefree part of an integer polynomial (highest degree first)."""

    def trim(a):
        while a and a[0] == 0:
            a = a[1:]
        return a

    def pmod(a, b):
        a = list(a)
        while len(a) >= len(b) and a:
            f = a[0] / b[0]
            for i in range(len(b)):
                a[i] -= f * b[i]
            a = trim(a[1:]) if a[0] == 0 else trim(a)
        return a

    def pdiv(a, b):
        a, quo = list(a), []
        while len(a) >= len(b):
            f = a[0] / b[0]
            quo.append(f)
            for i in range(len(b)):
                a[i] -= f * b[i]
            a = a[1:]
        return quo

    f = [Fraction(x) for x in coeffs]
    deg = len(f) - 1
    df = [f[i] * (deg - i) for i in range(deg)]
    a, b = f, trim(df)
    while b:
        a, b = b, pmod(a, b)
    return pdiv(f, a) if len(a) > 1 else f


def reciprocal_root_moduli(l_poly: Sequence[int]) -> list[float]:
    """|alpha_i| for the distinct reciprocal roots of L(T) = prod (1 - alpha_i T)."""
    # reciprocal roots are the roots of T^2g L(1/T) = sum c_i T^(2g-i)
    sqf = _squarefree_part(list(l_poly))
    roots = np.roots([float(x) for x in sqf])
    return sorted(float(abs(r)) for r in roots)


def l_polynomial(c: Countable, max_genus: int = DESK_SCALE_GENUS) -> ZetaData:
    """Count N_1..N_2g and recover the L-polynomial; refuse above the guard."""
    g = c.genus()
    if g > max_genus:
        raise DeskScaleLimit(
            f"desk-scale limit: genus {g} > {max_genus}; counting over degree-{2 * g} extensions is infeasible"
        )
    q0 = c.count_field.order
    counts = [c.count_places(k) for k in range(1, 2 * g + 1)]
    lp = l_poly_from_counts(counts, q0)
    bad = check_functional_equation(lp, q0)
    if bad or lp[-1] != q0**g:
        raise InconsistencyError(f"functional equation fails at indices {bad} for L = {lp}")
    moduli = reciprocal_root_moduli(lp) if g else []
    for r in moduli:
        if abs(r - math.sqrt(q0)) > 1e-6:
            raise InconsistencyError(f"reciprocal root of modulus {r}, expected sqrt({q0})")
    return ZetaData(c.count_field, tuple(counts), tuple(lp), tuple(moduli))
