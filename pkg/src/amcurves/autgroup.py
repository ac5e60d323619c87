"""Automorphisms of generalized Artin-Mumford curves.

Structured maps (swap, lambda, alpha, beta) act by
``(x, y) -> (lam*u + alpha, y_scale*v + beta)`` with ``(u, v) = (x, y)`` or
``(y, x)`` and ``y_scale = 1/lam``.  They cover the translations tau, the
scalings theta and the swap xi.  General affine-linear maps are only needed
by the brute-force search oracle.
"""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bivariate import Poly2, lin_substitute
from .curve import AMCurve, affine_points
from .errors import BudgetExceeded, InconsistencyError, ParameterError
from .gf import (
    FieldElement,
    FiniteField,
    add_indices,
    all_coords,
    embed,
    inverse_table,
    mul_indices,
    primitive_root_of_unity,
    to_index,
)
from .linpoly import kernel_in, values

DEFAULT_BUDGET = 10**8


# --------------------------------------------------------------------------
# maps
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AutMap:
    swap: bool
    lam: FieldElement
    alpha: FieldElement
    beta: FieldElement

    @property
    def field(self) -> FiniteField:
        return self.lam.field

    @classmethod
    def identity(cls, F: FiniteField) -> AutMap:
        return cls(False, F.one(), F.zero(), F.zero())

    @classmethod
    def tau(cls, alpha: FieldElement, beta: FieldElement) -> AutMap:
        return cls(False, alpha.field.one(), alpha, beta)

    @classmethod
    def theta(cls, lam: FieldElement) -> AutMap:
        F = lam.field
        return cls(False, lam, F.zero(), F.zero())

    @classmethod
    def xi(cls, F: FiniteField) -> AutMap:
        return cls(True, F.one(), F.zero(), F.zero())

    def __post_init__(self):
        if not self.lam:
            raise ParameterError("lambda must be nonzero")

    def __call__(self, x: FieldElement, y: FieldElement) -> tuple[FieldElement, FieldElement]:
        u, v = (y, x) if self.swap else (x, y)
        return self.lam * u + self.alpha, self.lam.inverse() * v + self.beta

    def compose(self, other: AutMap) -> AutMap:
        """self o other (other applied first)."""
        l1, l2 = self.lam, other.lam
        if not self.swap:
            return AutMap(other.swap, l1 * l2, l1 * other.alpha + self.alpha, l1.inverse() * other.beta + self.beta)
        return AutMap(not other.swap, l1 / l2, l1 * other.beta + self.alpha, l1.inverse() * other.alpha + self.beta)

    __matmul__ = compose

    def inverse(self) -> AutMap:
        lam = self.lam
        if not self.swap:
            li = lam.inverse()
            return AutMap(False, li, -(li * self.alpha), -(lam * self.beta))
        return AutMap(True, lam, -(lam * self.beta), -(lam.inverse() * self.alpha))

    def power(self, k: int) -> AutMap:
        out = AutMap.identity(self.field)
        for _ in range(k):
            out = self.compose(out)
        return out

    def order(self) -> int:
        ident = AutMap.identity(self.field)
        g, k = self, 1
        while g != ident:
            g, k = self.compose(g), k + 1
        return k

    @property
    def is_identity(self) -> bool:
        return not self.swap and self.lam == 1 and not self.alpha and not self.beta

    @property
    def is_translation(self) -> bool:
        return not self.swap and self.lam == 1

    def as_affine(self) -> AffineMap:
        F, lam = self.field, self.lam
        z = F.zero()
        if not self.swap:
            return AffineMap(lam, z, self.alpha, z, lam.inverse(), self.beta)
        return AffineMap(z, lam, self.alpha, lam.inverse(), z, self.beta)

    def key(self) -> tuple:
        return (int(self.swap), self.lam.index, self.alpha.index, self.beta.index)

    def __lt__(self, other: AutMap) -> bool:
        return self.key() < other.key()

    def label(self) -> str:
        if self.is_identity:
            return "id"
        if self.is_translation:
            return f"tau({self.alpha}, {self.beta})"
        core = ("xi*" if self.swap else "") + (f"theta({self.lam})" if self.lam != 1 else "")
        core = core.rstrip("*")
        if self.alpha or self.beta:
            return f"tau({self.alpha}, {self.beta})*{core}"
        return core

    def act_on_label(self, label: tuple[str, FieldElement]) -> tuple[str, FieldElement]:
        """Action on the places at infinity P_{x=a} ('x', a) and P_{y=b} ('y', b)."""
        side, val = label
        if not self.swap:
            if side == "x":
                return ("x", self.lam * val + self.alpha)
            return ("y", self.lam.inverse() * val + self.beta)
        if side == "x":
            return ("y", self.lam.inverse() * val + self.beta)
        return ("x", self.lam * val + self.alpha)

    def to_dict(self) -> dict:
        return {
            "swap": self.swap,
            "lambda": self.lam.to_list(),
            "alpha": self.alpha.to_list(),
            "beta": self.beta.to_list(),
        }


@dataclass(frozen=True)
class AffineMap:
    """(x, y) -> (a x + b y + e, c x + d y + f)."""

    a: FieldElement
    b: FieldElement
    e: FieldElement
    c: FieldElement
    d: FieldElement
    f: FieldElement

    @property
    def field(self) -> FiniteField:
        return self.a.field

    @property
    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls, F: FiniteField) -> AffineMap:
        o, z = F.one(), F.zero()
        return cls(o, z, z, z, o, z)

    def __call__(self, x, y):
        return self.a * x + self.b * y + self.e, self.c * x + self.d * y + self.f

    def compose(self, other: AffineMap) -> AffineMap:
        s, o = self, other
        return AffineMap(
            s.a * o.a + s.b * o.c,
            s.a * o.b + s.b * o.d,
            s.a * o.e + s.b * o.f + s.e,
            s.c * o.a + s.d * o.c,
            s.c * o.b + s.d * o.d,
            s.c * o.e + s.d * o.f + s.f,
        )

    def inverse(self) -> AffineMap:
        di = self.det.inverse()
        a, b, c, d = self.d * di, -(self.b * di), -(self.c * di), self.a * di
        return AffineMap(a, b, -(a * self.e + b * self.f), c, d, -(c * self.e + d * self.f))

    @property
    def is_identity(self) -> bool:
        return self == AffineMap.identity(self.field)

    @property
    def is_swap_shape(self) -> bool:
        return not self.a and not self.d

    def key(self) -> tuple:
        return tuple(v.index for v in (self.a, self.b, self.e, self.c, self.d, self.f))

    def __lt__(self, other: AffineMap) -> bool:
        return self.key() < other.key()

    def to_autmap(self) -> AutMap | None:
        """The structured form, if this map has one."""
        if not self.b and not self.c and self.a and self.d == self.a.inverse():
            return AutMap(False, self.a, self.e, self.f)
        if not self.a and not self.d and self.b and self.c == self.b.inverse():
            return AutMap(True, self.b, self.e, self.f)
        return None

    def label(self) -> str:
        return f"({self.a})x + ({self.b})y + {self.e}, ({self.c})x + ({self.d})y + {self.f}"

    def to_dict(self) -> dict:
        return {k: getattr(self, k).to_list() for k in "abecdf"}


# --------------------------------------------------------------------------
# symbolic verification
# --------------------------------------------------------------------------


@dataclass
class Verification:
    ok: bool
    kappa: FieldElement | None
    transcript: list[str]
    mismatch: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _curve_over(c: AMCurve, F: FiniteField):
    if F.p != c.p or F.d % c.count_field.d:
        raise ParameterError(f"{F} does not contain the coefficient field {c.count_field} of the curve")
    return c.L1.over(F), c.L2.over(F)


def verify_automorphism(c: AMCurve, phi: AutMap | AffineMap) -> Verification:
    """Check F(phi(X, Y)) = kappa * F(X, Y) coefficientwise, F = L1(X) L2(Y) - 1.

    Each factor is expanded through additivity of the linearized polynomial,
    L(aX + bY + e) = sum_i c_i (a^Q X^Q + b^Q Y^Q) + L(e).
    """
    aff = phi.as_affine() if isinstance(phi, AutMap) else phi
    F = aff.field
    L1, L2 = _curve_over(c, F)
    if not aff.det:
        return Verification(False, None, ["linear part is singular"], ("det", 0))
    P1 = lin_substitute(L1, aff.a, aff.b, aff.e)
    P2 = lin_substitute(L2, aff.c, aff.d, aff.f)
    lhs = P1 * P2 - Poly2.const(F.one())
    one = F.one()
    rhs_base = lin_substitute(L1, one, F.zero(), F.zero()) * lin_substitute(L2, F.zero(), one, F.zero())
    rhs_base = rhs_base - Poly2.const(one)
    transcript = [f"L1(aX+bY+e) = {P1}", f"L2(cX+dY+f) = {P2}"]
    kappa = -lhs.coeff(0, 0)
    transcript.append(f"kappa = -(constant term) = {kappa}")
    if not kappa:
        return Verification(False, None, transcript + ["constant term vanishes"], ((0, 0), F.zero(), -one))
    rhs = rhs_base * kappa
    diff = lhs.first_difference(rhs)
    if diff is None:
        transcript.append(f"F o phi = ({kappa}) * F coefficientwise over {len(rhs.terms)} monomials")
        return Verification(True, kappa, transcript)
    mono, got, want = diff
    transcript.append(f"first mismatch at X^{mono[0]} Y^{mono[1]}: {got} != {want}")
    return Verification(False, kappa, transcript, diff)


# --------------------------------------------------------------------------
# groups
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AutGroup:
    elements: frozenset
    generators: tuple
    field: FiniteField
    kind: str  # "delta", "gamma" or "search"
    curve: AMCurve | None = None
    lam: FieldElement | None = None
    structure_tags: tuple[str, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def identity(self):
        return (AutMap if self.kind != "search" else AffineMap).identity(self.field)

    def sigma(self) -> frozenset:
        if self.kind == "search":
            return frozenset(self.sylow_elements())
        return frozenset(g for g in self.elements if g.is_translation)

    def sylow_elements(self) -> list:
        p = self.field.p
        return [g for g in self.elements if _element_order(g, self.identity()) in _p_powers(p, self.order)]


def _p_powers(p: int, bound: int) -> set[int]:
    out, k = set(), 1
    while k <= bound:
        out.add(k)
        k *= p
    return out


def _element_order(g, ident) -> int:
    h, k = g, 1
    while h != ident:
        h, k = g.compose(h), k + 1
    return k


def closure(generators: Sequence, ident) -> frozenset:
    """Group generated by ``generators`` by breadth-first right multiplication."""
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = g.compose(s)
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return frozenset(seen)


def sigma_generators(c: AMCurve, F: FiniteField) -> list[AutMap]:
    """tau_{b,0}, tau_{0,b'} for GF(p)-bases of ker L1 and ker L2 inside F."""
    L1, L2 = _curve_over(c, F)
    k1, k2 = kernel_in(L1, F), kernel_in(L2, F)
    if len(k1) != c.q or len(k2) != c.q:
        raise ParameterError(f"{F} does not contain both kernels; need GF({c.p}^{c.ambient.d}) or an extension")
    z = F.zero()
    return [AutMap.tau(F(b), z) for b in k1.basis] + [AutMap.tau(z, F(b)) for b in k2.basis]


def claimed_group(c: AMCurve, ambient: FiniteField | None = None, check: bool = True) -> AutGroup:
    """Sigma x| Delta when L1 and L2 agree up to scaling, Sigma x| Gamma otherwise."""
    F = ambient or c.ambient
    if F.d % c.n:
        raise ParameterError(f"{F} does not contain GF({c.qbar})")
    lam = primitive_root_of_unity(F, c.qbar - 1)
    gens = sigma_generators(c, F) + [AutMap.theta(lam)]
    kind = "delta" if c.diagonal else "gamma"
    if kind == "delta":
        gens.append(AutMap.xi(F))
    if check:
        for g in gens:
            v = verify_automorphism(c, g)
            if not v:
                raise InconsistencyError(f"generator {g.label()} fails verification: {v.transcript[-1]}")
    elems = closure(gens, AutMap.identity(F))
    expected = (2 if kind == "delta" else 1) * (c.qbar - 1) * c.q**2
    if len(elems) != expected:
        raise InconsistencyError(f"closure has order {len(elems)}, expected {expected}")
    if check:
        bad = [g for g in elems if not verify_automorphism(c, g)]
        if bad:
            raise InconsistencyError(f"{len(bad)} group elements fail verification, e.g. {bad[0].label()}")
    return AutGroup(elems, tuple(gens), F, kind, c, lam)


# --------------------------------------------------------------------------
# structure certificate
# --------------------------------------------------------------------------


@dataclass
class Relation:
    name: str
    lhs: str
    rhs: str
    ok: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "ok": self.ok}


@dataclass
class Certificate:
    order: int
    structure: list[str]
    relations: list[Relation]
    orbit_data: dict | None = None

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.relations)

    def failed(self) -> list[Relation]:
        return [r for r in self.relations if not r.ok]

    def to_dict(self) -> dict:
        out = {
            "order": self.order,
            "structure": list(self.structure),
            "relations": [r.to_dict() for r in self.relations],
        }
        if self.orbit_data is not None:
            out["orbit_data"] = self.orbit_data
        return out


def _autmap_arrays(elems: Sequence[AutMap]) -> tuple[np.ndarray, ...]:
    return (
        np.array([int(g.swap) for g in elems], dtype=np.int64),
        np.array([g.lam.index for g in elems], dtype=np.int64),
        np.array([g.alpha.index for g in elems], dtype=np.int64),
        np.array([g.beta.index for g in elems], dtype=np.int64),
    )


def _compose_arrays(F: FiniteField, A, B):
    """Vectorized AutMap composition A[i] o B[i]."""
    s1, l1, a1, b1 = A
    s2, l2, a2, b2 = B
    inv = inverse_table(F)
    l1i = inv[l1]
    plain = s1 == 0
    lam = np.where(plain, mul_indices(F, l1, l2), mul_indices(F, l1, inv[l2]))
    first = np.where(plain, a2, b2)
    second = np.where(plain, b2, a2)
    alpha = add_indices(F, mul_indices(F, l1, first), a1)
    beta = add_indices(F, mul_indices(F, l1i, second), b1)
    return (s1 ^ s2, lam, alpha, beta)


def _keys(F: FiniteField, arrs) -> np.ndarray:
    N = F.order
    s, l, a, b = arrs
    return ((s * N + l) * N + a) * N + b


def exhaustive_closure(G: AutGroup) -> bool:
    """Every product g*h of two elements lies in G (all |G|^2 pairs)."""
    elems = sorted(G.elements)
    F = G.field
    arr = _autmap_arrays(elems)
    keys = np.sort(_keys(F, arr))
    n = len(elems)
    for start in range(0, n, max(1, 2_000_000 // n)):
        stop = min(n, start + max(1, 2_000_000 // n))
        left = tuple(np.repeat(x[start:stop], n) for x in arr)
        right = tuple(np.tile(x, stop - start) for x in arr)
        prod = _keys(F, _compose_arrays(F, left, right))
        if not np.isin(prod, keys, assume_unique=False).all():
            return False
    return True


def structure_report(G: AutGroup) -> Certificate:
    """Certify the semidirect-product structure of a claimed group."""
    if G.kind == "search":
        return _search_report(G)
    F, lam, c = G.field, G.lam, G.curve
    ident = AutMap.identity(F)
    rel: list[Relation] = []

    def add(name, lhs, rhs, ok=None):
        rel.append(Relation(name, str(lhs), str(rhs), bool(lhs == rhs) if ok is None else bool(ok)))

    elems = G.elements
    add("identity in G", ident in elems, True)
    add("inverses in G", all(g.inverse() in elems for g in elems), True)
    add("closure (all pairs)", exhaustive_closure(G), True)
    add("closure matches generated group", len(closure(G.generators, ident)), G.order)

    sigma = G.sigma()
    add("|Sigma| = q^2", len(sigma), c.q**2)
    p = F.p
    add("Sigma elementary abelian: g^p = 1", all(g.power(p) == ident for g in sigma), True)
    add("Sigma abelian", all(a.compose(b) == b.compose(a) for a, b in itertools.combinations(sigma, 2)), True)
    normal = all(g.compose(s).compose(g.inverse()) in sigma for g in G.generators for s in sigma)
    add("Sigma normal in G", normal, True)
    index = G.order // len(sigma)
    add("Sigma Sylow: p does not divide [G:Sigma]", index % p != 0, True)

    theta = AutMap.theta(lam)
    gamma = closure([theta], ident)
    add("theta order = qbar - 1", theta.order(), c.qbar - 1)
    add("|Gamma| = qbar - 1", len(gamma), c.qbar - 1)
    add("theta^(qbar-1) = 1", theta.power(c.qbar - 1), ident)
    complement = gamma
    tags = ["elementary-abelian Sigma", "normal Sigma", "Sylow Sigma", "cyclic Gamma"]
    if G.kind == "delta":
        xi = AutMap.xi(F)
        delta = closure([theta, xi], ident)
        add("xi^2 = 1", xi.compose(xi), ident)
        add("xi theta xi = theta^-1", xi.compose(theta).compose(xi), theta.inverse())
        add("|Delta| = 2(qbar - 1)", len(delta), 2 * (c.qbar - 1))
        complement = delta
        tags.append("dihedral Delta")
    else:
        add("xi absent", any(g.swap for g in elems), False)
    cname = "Delta" if G.kind == "delta" else "Gamma"
    add(f"Sigma meet {cname} = 1", len(sigma & complement), 1)
    products = {s.compose(d) for s in sigma for d in complement}
    add(f"Sigma*{cname} -> G bijective", len(products) == len(sigma) * len(complement) == G.order, True)

    for t in [g for g in G.generators if g.is_translation]:
        lhs = theta.compose(t).compose(theta.inverse())
        add(f"theta {t.label()} theta^-1", lhs.label(), AutMap.tau(lam * t.alpha, lam.inverse() * t.beta).label())
        if G.kind == "delta":
            lhs = xi.compose(t).compose(xi)
            add(f"xi {t.label()} xi", lhs.label(), AutMap.tau(t.beta, t.alpha).label())

    if all(r.ok for r in rel):
        tags.append("semidirect")
    orbits = sigma_orbits(c, F)
    return Certificate(G.order, tags, rel, orbits.to_dict())


def _search_report(G: AutGroup) -> Certificate:
    ident = G.identity()
    rel = []
    elems = G.elements
    rel.append(Relation("identity in G", str(ident in elems), "True", ident in elems))
    inv_ok = all(g.inverse() in elems for g in elems)
    rel.append(Relation("inverses in G", str(inv_ok), "True", inv_ok))
    closed = all(g.compose(h) in elems for g in elems for h in elems)
    rel.append(Relation("closure (all pairs)", str(closed), "True", closed))
    sylow = frozenset(G.sylow_elements())
    normalizes = all(g.compose(s).compose(g.inverse()) in sylow for g in elems for s in sylow)
    rel.append(Relation("every map normalizes the p-subgroup", str(normalizes), "True", normalizes))
    swaps = sum(1 for g in elems if g.is_swap_shape)
    tags = ["swap-shape present" if swaps else "no swap-shape"]
    return Certificate(G.order, tags, rel, {"sylow_order": len(sylow), "swap_shape_maps": swaps})


# --------------------------------------------------------------------------
# orbits at infinity
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitData:
    orbits: tuple[tuple[tuple[str, FieldElement], ...], ...]
    stabilizers: tuple[frozenset, ...]
    fixed_coordinate: tuple[str, ...]  # which translation part is forced to 0

    @property
    def lengths(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def to_dict(self) -> dict:
        return {
            "orbit_lengths": self.lengths,
            "stabilizer_orders": [len(s) for s in self.stabilizers],
            "stabilizer_meet": len(self.stabilizers[0] & self.stabilizers[1]) if len(self.stabilizers) == 2 else None,
            "stabilizer_fixes": list(self.fixed_coordinate),
            "orbits": [[f"P_{{{side}={val}}}" for side, val in o] for o in self.orbits],
        }


def sigma_orbits(c: AMCurve, ambient: FiniteField | None = None) -> OrbitData:
    """Orbits and stabilizers of Sigma on the 2q places at infinity."""
    F = ambient or c.ambient
    L1, L2 = _curve_over(c, F)
    k1, k2 = kernel_in(L1, F), kernel_in(L2, F)
    sigma = [AutMap.tau(a, b) for a in k1 for b in k2]
    labels = [("x", a) for a in k1] + [("y", b) for b in k2]
    remaining = set(labels)
    orbits, stabs, fixes = [], [], []
    for lab in labels:
        if lab not in remaining:
            continue
        orbit = sorted({t.act_on_label(lab) for t in sigma}, key=lambda l: (l[0], l[1].index))
        remaining -= set(orbit)
        stab = frozenset(t for t in sigma if t.act_on_label(lab) == lab)
        orbits.append(tuple(orbit))
        stabs.append(stab)
        fixes.append("alpha = 0" if all(not t.alpha for t in stab) else "beta = 0" if all(not t.beta for t in stab) else "none")
    data = OrbitData(tuple(orbits), tuple(stabs), tuple(fixes))
    q = c.q
    problems = []
    if data.lengths != [q, q]:
        problems.append(f"orbit lengths {data.lengths} != [{q}, {q}]")
    for o, s in zip(orbits, stabs):
        if len(o) * len(s) != q * q:
            problems.append("orbit-stabilizer count fails")
    if len(stabs) == 2 and (stabs[0] == stabs[1] or len(stabs[0] & stabs[1]) != 1):
        problems.append("stabilizers coincide or meet nontrivially")
    if problems:
        raise InconsistencyError("; ".join(problems))
    return data


# --------------------------------------------------------------------------
# brute-force oracle
# --------------------------------------------------------------------------


@dataclass
class SearchStats:
    field: FiniteField
    test_field: FiniteField
    points: int
    x_parts: int
    y_parts: int
    matched_pairs: int
    symbolic_checks: int

    @property
    def evaluations(self) -> int:
        return self.x_parts + self.y_parts + self.matched_pairs

    def to_dict(self) -> dict:
        return {
            "field": repr(self.field),
            "test_field": repr(self.test_field),
            "affine_points": self.points,
            "x_parts": self.x_parts,
            "y_parts": self.y_parts,
            "matched_pairs": self.matched_pairs,
            "symbolic_checks": self.symbolic_checks,
        }


MIN_TEST_POINTS = 8
MAX_TEST_FIELD = 3**8


def test_point_field(c: AMCurve, F: FiniteField) -> tuple[FiniteField, np.ndarray, np.ndarray]:
    """Least extension E of F (by degree) with at least MIN_TEST_POINTS affine
    points, and those points.  Any map defined over F that preserves the curve
    also permutes its points over E."""
    from .gf import make_field

    k = 1
    while True:
        E = make_field(F.p, F.d * k, 0)
        xs, ys = affine_points(c.in_field(E), E)
        if len(xs) >= MIN_TEST_POINTS or E.order * F.p ** F.d > MAX_TEST_FIELD:
            return E, xs, ys
        k += 1


def _part_values(E: FiniteField, el: np.ndarray, xs: np.ndarray, ys: np.ndarray, a: int) -> np.ndarray:
    """Rows (a, b, e), a fixed, b and e from ``el`` -> index of a*x + b*y + e
    at every test point; shape (len(el)^2, npts)."""
    n = len(el)
    C = all_coords(E)
    ax = C[mul_indices(E, np.full_like(xs, a), xs)]  # (npts, d)
    by = C[mul_indices(E, el[:, None], ys[None, :])]  # (n, npts, d)
    full = ax[None, None] + by[:, None] + C[el][None, :, None, :]  # (n, n, npts, d)
    return to_index(E, full).reshape(n * n, len(xs))


def linear_aut_search(
    c: AMCurve, D: int, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> tuple[AutGroup, SearchStats]:
    """All (x, y) -> (ax + by + e, cx + dy + f) over GF(p^D) preserving the curve.

    Each half of the map is evaluated on the affine points of the curve over
    a test field E containing GF(p^D); halves are paired by hashing the
    vectors 1/L1(x-part) and L2(y-part), which must agree.  Surviving pairs
    with nonzero determinant are confirmed symbolically.
    """
    from .gf import make_field

    F = make_field(c.p, D, 0)
    if D % c.count_field.d:
        raise ParameterError(f"GF({c.p}^{D}) does not contain the coefficient field {c.count_field}")
    L1, L2 = c.L1.over(F), c.L2.over(F)
    if len(kernel_in(L1, F)) != c.q or len(kernel_in(L2, F)) != c.q:
        raise ParameterError(
            f"GF({c.p}^{D}) does not contain both kernels; the kernel field is GF({c.p}^{c.ambient.d})"
        )
    N = F.order
    if 2 * N**3 > budget:
        raise BudgetExceeded(f"search needs {2 * N**3} half-map evaluations, budget {budget}")
    E, xs, ys = test_point_field(c, F)
    emb = embed(F, E)
    el = np.array([emb(F.from_index(i)).index for i in range(N)], dtype=np.int64)
    npts = len(xs)
    inv = inverse_table(E)
    v1, v2 = values(c.L1.over(E), E), values(c.L2.over(E), E)
    L1U = np.empty((N**3, npts), dtype=np.int64)
    Vy = np.empty((N**3, npts), dtype=np.int64)

    def block(a):
        U = _part_values(E, el, xs, ys, el[a])
        L1U[a * N * N:(a + 1) * N * N] = v1[U]
        Vy[a * N * N:(a + 1) * N * N] = v2[U]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(block, range(N)))
    else:
        for a in range(N):
            block(a)
    x_ok = np.all(L1U != 0, axis=1)
    target = inv[L1U]
    buckets: dict[bytes, list[int]] = {}
    for j in range(N**3):
        buckets.setdefault(Vy[j].tobytes(), []).append(j)
    pairs = []
    for i in np.nonzero(x_ok)[0]:
        for j in buckets.get(target[i].tobytes(), ()):
            pairs.append((int(i), j))
            if len(pairs) + 2 * N**3 > budget:
                raise BudgetExceeded(f"search exceeds the budget of {budget} candidate evaluations")

    def split(k):
        a, rest = divmod(k, N * N)
        b, e = divmod(rest, N)
        return a, b, e

    found = set()
    checks = 0
    for i, j in pairs:
        a, b, e = (F.from_index(t) for t in split(i))
        cc, d, f = (F.from_index(t) for t in split(j))
        if not (a * d - b * cc):
            continue
        checks += 1
        m = AffineMap(a, b, e, cc, d, f)
        if verify_automorphism(c, m):
            found.add(m)
    stats = SearchStats(F, E, npts, N**3, N**3, len(pairs), checks)
    return AutGroup(frozenset(found), (), F, "search", c), stats


def _push(m: AffineMap, e) -> AffineMap:
    return AffineMap(*(e(v) for v in (m.a, m.b, m.e, m.c, m.d, m.f)))


def compare_with_claimed(found: AutGroup, claimed: AutGroup) -> dict:
    """Set comparison inside whichever of the two fields contains the other.

    The claimed set (all kernel translations, all of GF(qbar)*, the swap) does
    not depend on the embedding chosen.
    """
    A, B = found.field, claimed.field
    found_aff = set(found.elements)
    claimed_aff = {g.as_affine() for g in claimed.elements}
    if A != B:
        if B.d % A.d == 0:
            e = embed(A, B)
            found_aff = {_push(m, e) for m in found_aff}
        elif A.d % B.d == 0:
            e = embed(B, A)
            claimed_aff = {_push(m, e) for m in claimed_aff}
        else:
            return {"comparable": False}
    extra = found_aff - claimed_aff
    missing = claimed_aff - found_aff
    return {
        "comparable": True,
        "found": len(found_aff),
        "claimed": len(claimed_aff),
        "extra": len(extra),
        "missing": len(missing),
        "equal": not extra and not missing,
        "extra_examples": [m.label() for m in sorted(extra)[:3]],
    }
