"""Finite fields F_{p^n}, Galois rings GR(p^l, n) = W_l(F_{p^n}), and matrices over them.

A Galois ring is realized as (Z/p^l)[x]/(f) where f is the monic field modulus
with its coefficients lifted verbatim. Elements are immutable; every operation
returns a new value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from deformary import linalg
from deformary.errors import NonUnit, Singular, SpecMismatch


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _polymod_p(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by monic b over F_p (coefficients low to high)."""
    a = [x % p for x in a]
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    r = a[:db]
    while r and r[-1] == 0:
        r.pop()
    return r


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..n//2."""
    n = len(modulus) - 1
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _polymod_p(list(modulus), list(low) + [1], p):
                return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    if n == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=n):
        cand = tuple(low) + (1,)
        if low[0] and is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {n} over F_{p}")  # unreachable


@dataclass(frozen=True)
class FieldSpec:
    """The residue field k = F_{p^n} with a chosen modulus (low-to-high coefficients)."""

    p: int
    n: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.n < 1:
            raise ValueError("extension degree must be >= 1")
        mod = default_modulus(self.p, self.n) if self.modulus is None else tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.n + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.n}")
        if self.n == 1 and mod != (0, 1):
            raise ValueError("degree-1 fields use the modulus x")
        if not is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.n

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}


@dataclass(frozen=True)
class GaloisRing:
    spec: FieldSpec
    l: int = 1

    def __post_init__(self):
        if self.l < 1:
            raise ValueError("precision l must be >= 1")

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def n(self) -> int:
        return self.spec.n

    @cached_property
    def N(self) -> int:
        return self.spec.p**self.l

    @property
    def is_field(self) -> bool:
        return self.l == 1

    def __call__(self, value) -> "GaloisRingElement":
        return self.element(value)

    def element(self, value) -> "GaloisRingElement":
        if isinstance(value, GaloisRingElement):
            if value.ring != self:
                raise SpecMismatch(f"element of {value.ring} used in {self}")
            return value
        if isinstance(value, int):
            return GaloisRingElement(self, (value % self.N,) + (0,) * (self.n - 1))
        coeffs = [int(c) % self.N for c in value]
        if len(coeffs) > self.n:
            raise ValueError(f"too many coefficients for degree {self.n}")
        return GaloisRingElement(self, tuple(coeffs) + (0,) * (self.n - len(coeffs)))

    def zero(self) -> "GaloisRingElement":
        return self.element(0)

    def one(self) -> "GaloisRingElement":
        return self.element(1)

    def gen(self) -> "GaloisRingElement":
        """The class of x (a primitive generator of k over F_p when n > 1)."""
        return self.element([0, 1]) if self.n > 1 else self.one()

    def residue(self) -> "GaloisRing":
        return GaloisRing(self.spec, 1)

    def with_precision(self, l: int) -> "GaloisRing":
        return GaloisRing(self.spec, l)

    def elements(self) -> Iterable["GaloisRingElement"]:
        for coeffs in itertools.product(range(self.N), repeat=self.n):
            yield GaloisRingElement(self, coeffs)

    def units(self) -> Iterable["GaloisRingElement"]:
        return (e for e in self.elements() if e.is_unit())

    def __repr__(self):
        return f"GR({self.p}^{self.l}, {self.n})"


@dataclass(frozen=True, eq=True)
class GaloisRingElement:
    ring: GaloisRing
    coeffs: tuple[int, ...]

    @property
    def spec(self) -> FieldSpec:
        return self.ring.spec

    @property
    def l(self) -> int:
        return self.ring.l

    def _coerce(self, other) -> "GaloisRingElement":
        if isinstance(other, GaloisRingElement):
            if other.ring != self.ring:
                raise SpecMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        N = self.ring.N
        return GaloisRingElement(self.ring, tuple((a + b) % N for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        N = self.ring.N
        return GaloisRingElement(self.ring, tuple((-a) % N for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        N = self.ring.N
        return GaloisRingElement(self.ring, tuple((a - b) % N for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ring = self.ring
        N = ring.N
        n = ring.n
        if n == 1:
            return GaloisRingElement(ring, ((self.coeffs[0] * o.coeffs[0]) % N,))
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        mod = ring.spec.modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % N
            if c:
                for j in range(n + 1):
                    prod[k - n + j] -= c * mod[j]
        return GaloisRingElement(ring, tuple(x % N for x in prod[:n]))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __bool__(self):
        return any(self.coeffs)

    def __int__(self):
        if any(self.coeffs[1:]):
            raise ValueError("element is not in the prime ring")
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        p = self.ring.p
        return any(c % p for c in self.coeffs)

    def valuation(self) -> int:
        """Largest v with self in p^v GR; equals l for zero."""
        return min(linalg.valuation(c, self.ring.p, self.ring.l) for c in self.coeffs)

    def reduce(self) -> "GaloisRingElement":
        """Image in the residue field k."""
        return self.to_precision(1)

    def to_precision(self, l: int) -> "GaloisRingElement":
        """Reduce (l smaller) or lift representatives verbatim (l larger)."""
        ring = self.ring.with_precision(l)
        return GaloisRingElement(ring, tuple(c % ring.N for c in self.coeffs))

    def divide_p_power(self, k: int) -> "GaloisRingElement":
        """Exact division by p^k, landing at precision l - k."""
        pk = self.ring.p**k
        if any(c % pk for c in self.coeffs):
            raise ValueError(f"element not divisible by p^{k}")
        ring = self.ring.with_precision(self.ring.l - k)
        return GaloisRingElement(ring, tuple((c // pk) % ring.N for c in self.coeffs))

    def frobenius(self) -> "GaloisRingElement":
        """x -> x^p on the residue field (l = 1 only)."""
        if self.ring.l != 1:
            raise ValueError("Frobenius is only provided on k")
        return self ** self.ring.p

    def inverse(self) -> "GaloisRingElement":
        if not self.is_unit():
            raise NonUnit(f"{self} is not a unit")
        ring = self.ring
        if ring.n == 1:
            return GaloisRingElement(ring, (pow(self.coeffs[0], -1, ring.N),))
        k = ring.residue()
        a0 = self.reduce()
        x = a0 ** (k.spec.q - 2)
        # Newton: x <- x (2 - a x) doubles the p-adic precision each step
        x = x.to_precision(ring.l)
        prec = 1
        while prec < ring.l:
            x = x * (2 - self * x)
            prec *= 2
        return x

    def multiplication_matrix(self) -> list[list[int]]:
        """Matrix of y -> self*y on coefficient vectors over Z/p^l (column j = self * x^j)."""
        n = self.ring.n
        cols = [(self * self.ring.element([0] * j + [1])).coeffs for j in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def multiplicative_order(self) -> int:
        if not self.is_unit():
            raise NonUnit("order of a non-unit")
        one = self.ring.one()
        x, k = self, 1
        while x != one:
            x = x * self
            k += 1
        return k

    def to_json(self) -> dict:
        return {"p": self.ring.p, "n": self.ring.n, "l": self.ring.l, "coeffs": list(self.coeffs)}

    def __repr__(self):
        if self.ring.n == 1:
            return str(self.coeffs[0])
        terms = [f"{c}" if i == 0 else (f"{c}*z" if i == 1 else f"{c}*z^{i}") for i, c in enumerate(self.coeffs) if c]
        return "(" + " + ".join(terms) + ")" if terms else "0"


def gr_arith(a: GaloisRingElement, b: GaloisRingElement | None, op: str) -> GaloisRingElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over a Galois ring, entries stored row-major."""

    ring: GaloisRing
    rows: int
    cols: int
    entries: tuple[GaloisRingElement, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        for e in self.entries:
            if e.ring != self.ring:
                raise SpecMismatch("matrix entries from different rings")

    @classmethod
    def from_rows(cls, ring: GaloisRing, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        if any(len(r) != nc for r in rows):
            raise ValueError("ragged rows")
        return cls(ring, nr, nc, tuple(ring.element(x) for r in rows for x in r))

    @classmethod
    def identity(cls, ring: GaloisRing, n: int) -> "Matrix":
        return cls.from_rows(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, ring: GaloisRing, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(ring, rows, cols, (ring.zero(),) * (rows * cols))

    @classmethod
    def diag(cls, ring: GaloisRing, values: Sequence) -> "Matrix":
        n = len(values)
        return cls.from_rows(ring, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        ring = blocks[0].ring
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[ring.zero()] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(ring, out)

    def __getitem__(self, ij) -> GaloisRingElement:
        i, j = ij
        return self.entries[i * self.cols + j]

    def tolist(self) -> list[list[GaloisRingElement]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix) or other.ring != self.ring:
            raise SpecMismatch("matrices over different rings")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.ring, self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.ring, self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.ring, self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "Matrix":
        c = self.ring.element(c)
        return Matrix(self.ring, self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a = self.tolist()
        bt = other.transpose().tolist()
        zero = self.ring.zero()
        out = []
        for row in a:
            for col in bt:
                s = zero
                for x, y in zip(row, col):
                    if x and y:
                        s = s + x * y
                out.append(s)
        return Matrix(self.ring, self.rows, other.cols, tuple(out))

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def trace(self) -> GaloisRingElement:
        s = self.ring.zero()
        for i in range(min(self.rows, self.cols)):
            s = s + self[i, i]
        return s

    def det(self) -> GaloisRingElement:
        """Division-free determinant (Laplace expansion over column subsets)."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return self.ring.one()
        # minors[mask] = det of rows 0..popcount(mask)-1 restricted to columns in mask
        minors = {0: self.ring.one()}
        for i in range(n):
            nxt = {}
            for mask, val in minors.items():
                if not val:
                    continue
                sign_count = 0
                for j in range(n):
                    if mask >> j & 1:
                        sign_count += 1
                        continue
                    # column j inserted after sign_count selected columns to its left
                    left = bin(mask & ((1 << j) - 1)).count("1")
                    term = val * self[i, j]
                    if (i - left) % 2:
                        term = -term
                    nm = mask | (1 << j)
                    nxt[nm] = nxt[nm] + term if nm in nxt else term
            minors = nxt
        return minors.get((1 << n) - 1, self.ring.zero())

    def reduce(self) -> "Matrix":
        return self.to_precision(1)

    def to_precision(self, l: int) -> "Matrix":
        ring = self.ring.with_precision(l)
        return Matrix(ring, self.rows, self.cols, tuple(e.to_precision(l) for e in self.entries))

    def is_identity(self) -> bool:
        return self.is_square() and self == Matrix.identity(self.ring, self.rows)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def inverse(self) -> "Matrix":
        return mat_inv(self)

    def __pow__(self, e: int) -> "Matrix":
        if e < 0:
            return self.inverse() ** (-e)
        result = Matrix.identity(self.ring, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def to_int_rows(self) -> list[list[int]]:
        """Expansion to a (rows*n) x (cols*n) integer matrix over Z/p^l."""
        n = self.ring.n
        out = [[0] * (self.cols * n) for _ in range(self.rows * n)]
        for i in range(self.rows):
            for j in range(self.cols):
                mm = self[i, j].multiplication_matrix()
                for a in range(n):
                    for b in range(n):
                        out[i * n + a][j * n + b] = mm[a][b]
        return out

    def to_json(self) -> list:
        if self.ring.n == 1:
            return [[e.coeffs[0] for e in row] for row in self.tolist()]
        return [[list(e.coeffs) for e in row] for row in self.tolist()]

    def __repr__(self):
        return f"Matrix({self.ring!r}, {[[repr(e) for e in r] for r in self.tolist()]})"


def mat_inv(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse over a local ring, pivoting on units."""
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    ring = m.ring
    n = m.rows
    a = m.tolist()
    inv = Matrix.identity(ring, n).tolist()
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col].is_unit()), None)
        if piv is None:
            raise Singular("determinant is not a unit")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        u = a[col][col].inverse()
        a[col] = [u * x for x in a[col]]
        inv[col] = [u * x for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return Matrix.from_rows(ring, inv)


def field_nullspace(rows: Sequence[Sequence[GaloisRingElement]], ncols: int, ring: GaloisRing) -> list[list[GaloisRingElement]]:
    """Basis of {v : A v = 0} over the field k (ring.l must be 1)."""
    if ring.l != 1:
        raise ValueError("field_nullspace needs a field (l = 1)")
    if ring.n == 1:
        int_rows = [[e.coeffs[0] for e in r] for r in rows]
        basis = linalg.nullspace_mod_p(int_rows, ncols, ring.p)
        return [[ring.element(x) for x in v] for v in basis]
    a = [list(r) for r in rows]
    pivcols = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        u = a[rank][col].inverse()
        a[rank] = [u * x for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        pivcols.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivcols]
    basis = []
    for fcol in free:
        v = [ring.zero()] * ncols
        v[fcol] = ring.one()
        for i, pc in enumerate(pivcols):
            v[pc] = -a[i][fcol]
        basis.append(v)
    return basis


def field_rank(rows: Sequence[Sequence[GaloisRingElement]], ncols: int, ring: GaloisRing) -> int:
    return ncols - len(field_nullspace(rows, ncols, ring))


@dataclass(frozen=True)
class KernelResult:
    mode: str
    size: int  # k-dimension (field) or log_p of the cardinality (howell)
    basis: list


def kernel_dim(m: Matrix, mode: str = "field") -> KernelResult:
    """Right kernel of m: k-dimension and basis (field) or log_p-cardinality and generators (howell)."""
    ring = m.ring
    if mode == "field":
        if ring.l != 1:
            raise ValueError("field mode requires l = 1")
        basis = field_nullspace(m.tolist(), m.cols, ring)
        return KernelResult("field", len(basis), basis)
    if mode == "howell":
        logcard, gens = linalg.kernel_mod(m.to_int_rows(), m.cols * ring.n, ring.p, ring.l)
        n = ring.n
        vecs = [[ring.element(g[j * n:(j + 1) * n]) for j in range(m.cols)] for g in gens]
        return KernelResult("howell", logcard, vecs)
    raise ValueError(f"unknown mode {mode!r}")
