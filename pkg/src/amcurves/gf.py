"""Finite fields GF(p^d) in polynomial basis, with subfield embeddings.

An element of GF(p^d) = GF(p)[T]/(f) is stored as its coordinate vector
``(a_0, ..., a_{d-1})`` with respect to ``1, T, ..., T^(d-1)``.  Elements are
also addressed by their *index* ``sum(a_i * p**i)``; the enumeration order of
a field is increasing index, i.e. coordinate vectors compared from the
highest coordinate down.

Scalar arithmetic is plain Python.  The ``*_table``/``*_matrix`` helpers at
the bottom give numpy views of the same arithmetic for the counting and
search kernels; they are memoised per field.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InconsistencyError, ParameterError

# --------------------------------------------------------------------------
# polynomials over GF(p) as coefficient lists, lowest degree first
# --------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, p), m, p)
    return result


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test: gcd(T^(p^k) - T, f) = 1 for k <= d/2 and T^(p^d) = T mod f."""
    f = _trim(list(modulus))
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    t = [0, 1]
    power = t
    for k in range(1, d + 1):
        power = _ppowmod(power, p, f, p)
        if k <= d // 2 and len(_pgcd(f, _psub(power, t, p), p)) != 1:
            return False
    return _psub(power, t, p) == []


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % k for k in range(3, r + 1, 2))


def prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


# --------------------------------------------------------------------------
# fields and elements
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteField:
    """GF(p^d) presented as GF(p)[T]/(modulus); immutable and hashable."""

    p: int
    d: int
    modulus: tuple[int, ...]
    seed: int = dc_field(default=0, compare=False)

    @property
    def order(self) -> int:
        return self.p**self.d

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.d})"

    def __call__(self, value: int | Sequence[int] | FieldElement) -> FieldElement:
        """Coerce an int (prime-field scalar), coordinate vector, or element."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ParameterError(f"element of {value.field} is not in {self}")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, (int(value) % self.p,) + (0,) * (self.d - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.d:
            raise ParameterError(f"coordinate vector longer than degree {self.d}")
        return FieldElement(self, tuple(coeffs) + (0,) * (self.d - len(coeffs)))

    def zero(self) -> FieldElement:
        return self(0)

    def one(self) -> FieldElement:
        return self(1)

    def gen(self) -> FieldElement:
        """The class of T (for d = 1 this is 0, the root of the modulus T)."""
        if self.d == 1:
            return FieldElement(self, (-self.modulus[0] % self.p,))
        return self([0, 1])

    def from_index(self, index: int) -> FieldElement:
        coeffs = []
        for _ in range(self.d):
            index, r = divmod(index, self.p)
            coeffs.append(r)
        return FieldElement(self, tuple(coeffs))

    def to_dict(self) -> dict:
        return {"p": self.p, "d": self.d, "seed": self.seed, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: dict) -> FiniteField:
        field = cls(int(data["p"]), int(data["d"]), tuple(int(c) for c in data["modulus"]), int(data.get("seed", 0)))
        _check_field(field)
        return field


class FieldElement:
    """An element of a :class:`FiniteField`, stored by coordinates."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    # identity -------------------------------------------------------------
    @property
    def index(self) -> int:
        p = self.field.p
        out = 0
        for c in reversed(self.coeffs):
            out = out * p + c
        return out

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.coeffs == self.field(int(other)).coeffs
        return NotImplemented

    def __lt__(self, other: FieldElement) -> bool:
        return self.index < other.index

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        if self.field.d == 1:
            return f"{self.coeffs[0]}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
                terms.append(f"{c}{mono}" if c != 1 or i == 0 else mono)
        return " + ".join(reversed(terms)) or "0"

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    # arithmetic -------------------------------------------------------------
    def _other(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ParameterError(f"cannot combine elements of {self.field} and {other.field}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.field(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        F = self.field
        if F.d == 1:
            return FieldElement(F, ((self.coeffs[0] * other.coeffs[0]) % F.p,))
        prod = _pmod(_pmul(self.coeffs, other.coeffs, F.p), F.modulus, F.p)
        return FieldElement(F, tuple(prod) + (0,) * (F.d - len(prod)))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        """Multiplicative inverse by the extended Euclidean algorithm."""
        F = self.field
        if not self:
            raise ZeroDivisionError("zero has no inverse")
        p = F.p
        if F.d == 1:
            return FieldElement(F, (pow(self.coeffs[0], p - 2, p),))
        r0, r1 = list(F.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        while r1:
            # one long-division step sequence: r0 = q*r1 + r
            q: list[int] = []
            r = list(r0)
            inv_lead = pow(r1[-1], p - 2, p)
            while len(r) >= len(r1) and r:
                c = (r[-1] * inv_lead) % p
                shift = len(r) - len(r1)
                if len(q) < shift + 1:
                    q.extend([0] * (shift + 1 - len(q)))
                q[shift] = c
                for i, v in enumerate(r1):
                    r[shift + i] = (r[shift + i] - c * v) % p
                _trim(r)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        # r0 is a nonzero constant
        c = pow(r0[0], p - 2, p)
        inv = _pmod([(c * v) % p for v in s0], F.modulus, p)
        return FieldElement(F, tuple(inv) + (0,) * (F.d - len(inv)))

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self, times: int = 1) -> FieldElement:
        """x -> x^(p^times)."""
        return self ** (self.field.p**times)

    def multiplicative_order(self) -> int:
        if not self:
            raise ParameterError("zero has no multiplicative order")
        n = self.field.order - 1
        order = n
        for r in prime_factors(n):
            while order % r == 0 and (self ** (order // r)) == 1:
                order //= r
        return order

    def in_subfield(self, k: int) -> bool:
        """True iff x^(p^k) = x, i.e. x lies in the copy of GF(p^k)."""
        return self.frobenius(k) == self


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------


def _check_field(field: FiniteField) -> None:
    if not is_prime(field.p) or field.p == 2:
        raise ParameterError(f"p must be an odd prime, got {field.p}")
    if len(field.modulus) != field.d + 1 or field.modulus[-1] != 1:
        raise ParameterError("modulus must be monic of degree d")
    if not is_irreducible(field.modulus, field.p):
        raise ParameterError("modulus is not irreducible")


@functools.lru_cache(maxsize=None)
def make_field(p: int, d: int, seed: int = 0) -> FiniteField:
    """Build GF(p^d) with an irreducible modulus found by a seeded search.

    Candidates are drawn from ``random.Random(seed)``; the first irreducible
    one is kept.  For d = 1 the modulus is T.
    """
    if not isinstance(p, int) or not is_prime(p) or p == 2:
        raise ParameterError(f"p must be an odd prime, got {p}")
    if d < 1:
        raise ParameterError(f"degree must be >= 1, got {d}")
    if d == 1:
        return FiniteField(p, 1, (0, 1), seed)
    rng = random.Random(seed)
    while True:
        cand = [rng.randrange(p) for _ in range(d)] + [1]
        if cand[0] and is_irreducible(cand, p):
            return FiniteField(p, d, tuple(cand), seed)


def enumerate_elements(F: FiniteField) -> Iterator[FieldElement]:
    """All p^d elements, in increasing index order."""
    for i in range(F.order):
        yield F.from_index(i)


def primitive_element(F: FiniteField) -> FieldElement:
    """Least (by index) generator of the multiplicative group."""
    return _primitive_element(F)


@functools.lru_cache(maxsize=None)
def _primitive_element(F: FiniteField) -> FieldElement:
    n = F.order - 1
    factors = prime_factors(n)
    for i in range(1, F.order):
        g = F.from_index(i)
        if all(g ** (n // r) != 1 for r in factors):
            return g
    raise InconsistencyError(f"no primitive element in {F}")


def primitive_root_of_unity(F: FiniteField, r: int) -> FieldElement:
    """An element of multiplicative order exactly r: g^((p^d - 1)/r)."""
    n = F.order - 1
    if r < 1 or n % r:
        raise ParameterError(f"{r} does not divide |{F}*| = {n}")
    return primitive_element(F) ** (n // r)


# --------------------------------------------------------------------------
# embeddings
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Ring homomorphism sub -> sup fixed by the image of sub's generator."""

    sub: FiniteField
    sup: FiniteField
    image_of_generator: FieldElement

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field == self.sup:
            return x
        if x.field != self.sub:
            raise ParameterError(f"{x.field} is not the domain {self.sub}")
        out = self.sup.zero()
        for c in reversed(x.coeffs):
            out = out * self.image_of_generator + c
        return out

    def matrix(self) -> np.ndarray:
        """Row i = coordinates in sup of the image of T^i."""
        return _embedding_matrix(self)


@functools.lru_cache(maxsize=None)
def _embedding_matrix(e: Embedding) -> np.ndarray:
    rows, cur = [], e.sup.one()
    for _ in range(e.sub.d):
        rows.append(cur.coeffs)
        cur = cur * e.image_of_generator
    return np.array(rows, dtype=np.int64)


def subfield_elements(F: FiniteField, k: int) -> list[FieldElement]:
    """The p^k elements of F fixed by Frobenius^k (k must divide F.d)."""
    if F.d % k:
        raise ParameterError(f"{k} does not divide {F.d}")
    # kernel of (Frob^k - I) acting on row vectors
    M = _frob_power(F, k)
    A = (M - np.eye(F.d, dtype=np.int64)) % F.p
    basis = left_nullspace_mod_p(A, F.p)
    if len(basis) != k:
        raise InconsistencyError(f"subfield of degree {k} in {F} has dimension {len(basis)}")
    return [F(v) for v in span_mod_p(basis, F.p)]


def _frob_power(F: FiniteField, k: int) -> np.ndarray:
    out = np.eye(F.d, dtype=np.int64)
    M = frobenius_matrix(F)
    for _ in range(k):
        out = (out @ M) % F.p
    return out


@functools.lru_cache(maxsize=None)
def embed(sub: FiniteField, sup: FiniteField) -> Embedding:
    """Embed sub into sup, sending T to the least root of sub's modulus."""
    if sub.p != sup.p:
        raise ParameterError(f"characteristics differ: {sub.p} vs {sup.p}")
    if sup.d % sub.d:
        raise ParameterError(f"degree {sub.d} does not divide {sup.d}: no embedding {sub} -> {sup}")
    if sub == sup:
        return Embedding(sub, sup, sup.gen())
    roots = []
    for x in subfield_elements(sup, sub.d):
        acc = sup.zero()
        for c in reversed(sub.modulus):
            acc = acc * x + c
        if not acc:
            roots.append(x)
    if not roots:
        raise InconsistencyError(f"modulus of {sub} has no root in {sup}")
    return Embedding(sub, sup, min(roots, key=lambda r: r.index))


# --------------------------------------------------------------------------
# linear algebra over GF(p)
# --------------------------------------------------------------------------


def left_nullspace_mod_p(A: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of {v : v @ A = 0 mod p}, in reduced form."""
    return nullspace_mod_p(np.asarray(A, dtype=np.int64).T % p, p)


def nullspace_mod_p(A: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of {v : A @ v = 0 mod p} by Gauss-Jordan elimination."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i, f]) % p
        basis.append(v)
    return basis


def solve_left_mod_p(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution v of v @ A = b (mod p), or None."""
    At = np.asarray(A, dtype=np.int64).T % p
    aug = np.concatenate([At, np.asarray(b, dtype=np.int64).reshape(-1, 1) % p], axis=1)
    sol = nullspace_mod_p(aug, p)
    # need a null vector with last coordinate -1
    for v in sol:
        if v[-1] % p:
            scale = (-pow(int(v[-1]), p - 2, p)) % p
            return (v[:-1] * scale) % p
    return None


def span_mod_p(basis: Sequence[np.ndarray], p: int) -> list[tuple[int, ...]]:
    """All GF(p)-combinations of the basis vectors."""
    if not basis:
        return []
    B = np.array(basis, dtype=np.int64)
    k = len(basis)
    combos = np.array(np.meshgrid(*[np.arange(p)] * k, indexing="ij")).reshape(k, -1).T
    vecs = (combos @ B) % p
    return [tuple(int(c) for c in row) for row in vecs]


# --------------------------------------------------------------------------
# bulk (numpy) views used by counting and search kernels
# --------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def index_weights(F: FiniteField) -> np.ndarray:
    return F.p ** np.arange(F.d, dtype=np.int64)


@functools.lru_cache(maxsize=None)
def all_coords(F: FiniteField) -> np.ndarray:
    """(p^d, d) array; row i holds the coordinates of the element of index i."""
    idx = np.arange(F.order, dtype=np.int64)
    out = np.empty((F.order, F.d), dtype=np.int64)
    for j in range(F.d):
        out[:, j] = idx % F.p
        idx //= F.p
    out.setflags(write=False)
    return out


def to_index(F: FiniteField, coords: np.ndarray) -> np.ndarray:
    return (np.asarray(coords) % F.p) @ index_weights(F)


def mul_matrix(a: FieldElement) -> np.ndarray:
    """Matrix of x -> a*x on row coordinate vectors."""
    return _mul_matrix(a.field, a.coeffs)


@functools.lru_cache(maxsize=4096)
def _mul_matrix(F: FiniteField, coeffs: tuple[int, ...]) -> np.ndarray:
    a = FieldElement(F, coeffs)
    rows, basis = [], F.one()
    T = F.gen() if F.d > 1 else F.one()
    for _ in range(F.d):
        rows.append((a * basis).coeffs)
        basis = basis * T
    return np.array(rows, dtype=np.int64)


@functools.lru_cache(maxsize=None)
def frobenius_matrix(F: FiniteField) -> np.ndarray:
    """Matrix of x -> x^p on row coordinate vectors."""
    rows, basis = [], F.one()
    T = F.gen() if F.d > 1 else F.one()
    for _ in range(F.d):
        rows.append((basis ** F.p).coeffs)
        basis = basis * T
    return np.array(rows, dtype=np.int64)


@functools.lru_cache(maxsize=None)
def log_tables(F: FiniteField) -> tuple[np.ndarray, np.ndarray]:
    """(exp, log): exp[k] = index of g^k, log[index] = k (log[0] = -1)."""
    n = F.order - 1
    g = primitive_element(F)
    block = max(1, math.isqrt(n))
    first = np.empty((block, F.d), dtype=np.int64)
    cur = F.one()
    for k in range(block):
        first[k] = cur.coeffs
        cur = cur * g
    step = mul_matrix(cur)  # multiplication by g^block
    chunks, rows = [], first
    for _ in range(-(-n // block)):
        chunks.append(rows)
        rows = (rows @ step) % F.p
    exp = to_index(F, np.concatenate(chunks)[:n])
    log = np.full(F.order, -1, dtype=np.int64)
    log[exp] = np.arange(n, dtype=np.int64)
    if (log[1:] < 0).any():
        raise InconsistencyError(f"log table for {F} is incomplete")
    return exp, log


def mul_indices(F: FiniteField, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Elementwise product of index arrays."""
    exp, log = log_tables(F)
    u, v = np.asarray(u), np.asarray(v)
    out = exp[(log[u] + log[v]) % (F.order - 1)]
    return np.where((u == 0) | (v == 0), 0, out)


@functools.lru_cache(maxsize=None)
def inverse_table(F: FiniteField) -> np.ndarray:
    """inv[i] = index of the inverse of element i; inv[0] = 0."""
    exp, log = log_tables(F)
    n = F.order - 1
    inv = np.zeros(F.order, dtype=np.int64)
    inv[1:] = exp[(-log[1:]) % n]
    inv.setflags(write=False)
    return inv


def elements_from(F: FiniteField, values: Iterable[int]) -> list[FieldElement]:
    return [F.from_index(int(v)) for v in values]


def add_indices(F: FiniteField, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Elementwise sum of index arrays."""
    C = all_coords(F)
    return to_index(F, C[np.asarray(u)] + C[np.asarray(v)])


def neg_indices(F: FiniteField, u: np.ndarray) -> np.ndarray:
    return to_index(F, -all_coords(F)[np.asarray(u)])
