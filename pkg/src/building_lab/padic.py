"""Truncated p-adic scalars and matrices.

A scalar is p^valuation * unit with the unit known modulo p^precision (relative
precision).  An exact zero has valuation inf.  A value known only to be divisible
by p^k is an inexact zero: precision 0, unit 0, valuation k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InsufficientPrecisionError, SingularMatrixError

INF = math.inf


def vp(x, p: int) -> float:
    """Exact valuation of an integer or rational; inf for 0."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


@dataclass(frozen=True)
class PrecisionBudget:
    membership: int = 3
    factorization: int = 3
    conjugation: int = 3

    def precision_for(self, threshold: int, kind: str = "membership") -> int:
        return int(threshold) + getattr(self, kind)


DEFAULT_BUDGET = PrecisionBudget()


@dataclass(frozen=True)
class PadicScalar:
    p: int
    valuation: float
    unit: int
    precision: int

    def __post_init__(self):
        if self.valuation == INF:
            object.__setattr__(self, "unit", 0)
            object.__setattr__(self, "precision", INF)
            return
        if self.precision < 0:
            raise DomainError("negative precision")
        if self.precision == 0:
            object.__setattr__(self, "unit", 0)
            return
        mod = self.p ** self.precision
        u = self.unit % mod
        if u % self.p == 0:
            raise DomainError("unit part must be prime to p")
        object.__setattr__(self, "unit", u)

    # construction
    @classmethod
    def zero(cls, p: int) -> "PadicScalar":
        return cls(p, INF, 0, INF)

    @classmethod
    def from_rational(cls, p: int, x, precision: int) -> "PadicScalar":
        """x known exactly; store it with the given relative precision."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        v = vp(x, p)
        y = x / Fraction(p) ** v
        mod = p ** precision
        u = y.numerator * pow(y.denominator, -1, mod) % mod
        return cls(p, v, u, precision)

    @classmethod
    def from_int(cls, p: int, a: int, precision: int) -> "PadicScalar":
        return cls.from_rational(p, a, precision)

    @classmethod
    def from_residue(cls, p: int, a: int, absolute: int) -> "PadicScalar":
        """An integer known modulo p^absolute."""
        a %= p ** absolute
        if a == 0:
            return cls(p, absolute, 0, 0)
        v = vp(a, p)
        return cls(p, v, a // p ** v, absolute - v)

    # basic data
    @property
    def is_exact_zero(self) -> bool:
        return self.valuation == INF

    @property
    def is_inexact_zero(self) -> bool:
        return self.valuation != INF and self.precision == 0

    @property
    def absolute_precision(self):
        return self.valuation + self.precision

    def val(self):
        if self.is_inexact_zero:
            raise InsufficientPrecisionError(
                f"value is 0 mod {self.p}^{self.valuation}; valuation not certified")
        return self.valuation

    def valuation_floor(self):
        return self.valuation

    def ge_threshold3(self, t) -> bool | None:
        """Three-valued test v(self) >= t: True, False or None (unknown)."""
        if self.is_exact_zero:
            return True
        if t == INF:
            return None if self.is_inexact_zero else False
        if self.is_inexact_zero:
            return True if self.valuation >= t else None
        return self.valuation >= t

    def ge_threshold(self, t) -> bool:
        r = self.ge_threshold3(t)
        if r is None:
            raise InsufficientPrecisionError(
                f"cannot decide v >= {t} from a value known to {self.p}^{self.absolute_precision}")
        return r

    def lift(self) -> Fraction:
        """A rational representative."""
        if self.is_exact_zero or self.is_inexact_zero:
            return Fraction(0)
        return Fraction(self.p) ** self.valuation * self.unit

    def residue(self, m: int) -> int:
        """Image in Z/p^m; requires v >= 0 and enough precision."""
        if self.is_exact_zero:
            return 0
        if self.absolute_precision < m:
            if not (self.is_inexact_zero and self.valuation >= m):
                raise InsufficientPrecisionError(f"need absolute precision {m}")
        if self.valuation < 0:
            raise DomainError("value is not integral")
        if self.is_inexact_zero:
            return 0
        return self.p ** int(self.valuation) * self.unit % self.p ** m

    def _norm(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise DomainError("mixed primes")
            return other
        prec = self.precision if self.precision != INF else 64
        return PadicScalar.from_rational(self.p, other, max(int(prec), 1))

    # arithmetic
    def __add__(self, other):
        b = self._norm(other)
        a = self
        if a.is_exact_zero:
            return b
        if b.is_exact_zero:
            return a
        absp = min(a.absolute_precision, b.absolute_precision)
        v0 = min(a.valuation, b.valuation)
        if v0 >= absp:
            return PadicScalar(a.p, absp, 0, 0)
        p = a.p
        mod = p ** int(absp - v0)
        x = (a.unit * p ** int(a.valuation - v0) + b.unit * p ** int(b.valuation - v0)) % mod
        if x == 0:
            return PadicScalar(p, absp, 0, 0)
        s = vp(x, p)
        return PadicScalar(p, v0 + s, x // p ** s, int(absp - v0 - s))

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact_zero or self.is_inexact_zero:
            return self
        return PadicScalar(self.p, self.valuation, -self.unit, self.precision)

    def __sub__(self, other):
        return self + (-self._norm(other))

    def __rsub__(self, other):
        return self._norm(other) + (-self)

    def __mul__(self, other):
        b = self._norm(other)
        a = self
        if a.is_exact_zero or b.is_exact_zero:
            return PadicScalar.zero(a.p)
        prec = min(a.precision, b.precision)
        v = a.valuation + b.valuation
        if prec == 0:
            # inexact zero times something: the floor adds
            return PadicScalar(a.p, v, 0, 0)
        return PadicScalar(a.p, v, a.unit * b.unit, int(prec))

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self.is_exact_zero:
            raise ZeroDivisionError("inverse of exact zero")
        if self.is_inexact_zero:
            raise InsufficientPrecisionError("inverse of a value indistinguishable from 0")
        mod = self.p ** self.precision
        return PadicScalar(self.p, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other):
        return self * self._norm(other).inverse()

    def __rtruediv__(self, other):
        return self._norm(other) * self.inverse()

    def shift(self, k: int) -> "PadicScalar":
        if self.is_exact_zero:
            return self
        return PadicScalar(self.p, self.valuation + k, self.unit, self.precision)

    def is_zero3(self) -> bool | None:
        return self.ge_threshold3(INF)

    def __str__(self):
        if self.is_exact_zero:
            return "0"
        if self.is_inexact_zero:
            return f"O({self.p}^{self.valuation})"
        return f"{self.p}^{self.valuation}*{self.unit} + O({self.p}^{self.absolute_precision})"


class PadicMatrix:
    """Square matrix of PadicScalar entries sharing one prime."""

    def __init__(self, p: int, rows: Sequence[Sequence[PadicScalar]]):
        self.p = p
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise DomainError("matrix must be square")
        for r in self.rows:
            for a in r:
                if a.p != p:
                    raise DomainError("entries use different primes")
        self._detval = None

    @classmethod
    def from_rationals(cls, p: int, rows, precision: int) -> "PadicMatrix":
        return cls(p, [[PadicScalar.from_rational(p, a, precision) for a in r] for r in rows])

    @classmethod
    def identity(cls, p: int, n: int, precision: int = 32) -> "PadicMatrix":
        one = PadicScalar.from_rational(p, 1, precision)
        zero = PadicScalar.zero(p)
        return cls(p, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "PadicMatrix") -> "PadicMatrix":
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = PadicScalar.zero(self.p)
                for k in range(n):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return PadicMatrix(self.p, out)

    def __sub__(self, other: "PadicMatrix") -> "PadicMatrix":
        return PadicMatrix(self.p, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def transpose(self) -> "PadicMatrix":
        return PadicMatrix(self.p, [list(c) for c in zip(*self.rows)])

    def lift(self) -> list[list[Fraction]]:
        return [[a.lift() for a in r] for r in self.rows]

    def min_valuation(self):
        """Certified minimum valuation over entries (exact zeros ignored)."""
        vals = []
        for r in self.rows:
            for a in r:
                if a.is_exact_zero:
                    continue
                vals.append(a.valuation)
        if not vals:
            return INF
        m = min(vals)
        for r in self.rows:
            for a in r:
                if a.is_inexact_zero and a.valuation <= m:
                    raise InsufficientPrecisionError("minimum valuation not certified")
        return m

    def working_precision(self) -> int:
        precs = [a.precision for r in self.rows for a in r if a.precision != INF]
        return int(max(precs)) if precs else 64

    def is_integral(self) -> bool:
        return all(a.ge_threshold(0) for r in self.rows for a in r)

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j].ge_threshold(INF) for i in range(self.n) for j in range(i))

    def residue(self, m: int) -> tuple:
        return tuple(tuple(a.residue(m) for a in r) for r in self.rows)

    def _eliminate(self, want_inverse: bool):
        n, p = self.n, self.p
        a = [list(r) for r in self.rows]
        P = self.working_precision()
        inv = [list(r) for r in PadicMatrix.identity(p, n, P).rows] if want_inverse else None
        det = PadicScalar.from_rational(p, 1, P)
        for c in range(n):
            piv, best = None, None
            for r in range(c, n):
                x = a[r][c]
                if x.is_exact_zero:
                    continue
                if x.is_inexact_zero:
                    continue
                if best is None or x.valuation < best:
                    piv, best = r, x.valuation
            if piv is None:
                if all(a[r][c].is_exact_zero for r in range(c, n)):
                    raise SingularMatrixError("matrix is singular")
                raise InsufficientPrecisionError("no certified pivot; determinant valuation unknown")
            for r in range(c, n):
                x = a[r][c]
                if x.is_inexact_zero and x.valuation <= best:
                    raise InsufficientPrecisionError("pivot choice not certified")
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                if inv is not None:
                    inv[c], inv[piv] = inv[piv], inv[c]
                det = -det
            pv = a[c][c]
            det = det * pv
            pinv = pv.inverse()
            a[c] = [x * pinv for x in a[c]]
            if inv is not None:
                inv[c] = [x * pinv for x in inv[c]]
            for r in range(n):
                if r == c or a[r][c].is_exact_zero:
                    continue
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
                a[r][c] = PadicScalar.zero(p)
                if inv is not None:
                    inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
        return det, inv

    def determinant(self) -> PadicScalar:
        det, _ = self._eliminate(False)
        self._detval = det.valuation
        return det

    def det_valuation(self):
        if self._detval is None:
            self.determinant()
        return self._detval

    def inverse(self) -> "PadicMatrix":
        det, inv = self._eliminate(True)
        self._detval = det.valuation
        return PadicMatrix(self.p, inv)

    def __eq__(self, other):
        return isinstance(other, PadicMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(a) for a in r) for r in self.rows) + "]"


def mat_inverse(g: PadicMatrix) -> PadicMatrix:
    return g.inverse()


def val(a: PadicScalar):
    return a.val()


def iwasawa_decompose(g: PadicMatrix) -> tuple[PadicMatrix, PadicMatrix]:
    """g = b k with b upper triangular and k in GL_n(Z_p)."""
    p, n = g.p, g.n
    if g.is_integral() and g.det_valuation() == 0:
        return PadicMatrix.identity(p, n, g.working_precision()), g
    zero = PadicScalar.zero(p)
    b = [[zero] * n for _ in range(n)]
    k = [None] * n
    pivots = []
    for i in range(n - 1, -1, -1):
        row = list(g.rows[i])
        for j, c in pivots:
            f = row[c]
            b[i][j] = f
            if not f.is_exact_zero:
                row = [x - f * y for x, y in zip(row, k[j])]
                row[c] = zero
        best, col = None, None
        used = {c for _, c in pivots}
        for c in range(n):
            if c in used:
                continue
            x = row[c]
            if x.is_exact_zero or x.is_inexact_zero:
                continue
            if best is None or x.valuation < best:
                best, col = x.valuation, c
        if col is None:
            raise InsufficientPrecisionError("cannot certify an Iwasawa pivot")
        for c in range(n):
            if c not in used and row[c].is_inexact_zero and row[c].valuation <= best:
                raise InsufficientPrecisionError("Iwasawa pivot not certified")
        piv = row[col]
        b[i][i] = piv
        pinv = piv.inverse()
        k[i] = [x * pinv for x in row]
        k[i][col] = PadicScalar.from_rational(p, 1, piv.precision)
        pivots.append((i, col))
    return PadicMatrix(p, b), PadicMatrix(p, k)


# -- exact rational variants used by the representation model -------------


def iwasawa_rational(g: Sequence[Sequence[Fraction]], p: int):
    """Exact Iwasawa factorization of a rational matrix: g = b k, b upper
    triangular rational, k with p-integral entries and unit determinant.

    Rows are processed bottom-up; each row is scaled to be primitive at its
    leftmost minimal-valuation entry, which is cleared from the rows above."""
    n = len(g)
    b = [[Fraction(0)] * n for _ in range(n)]
    k: list = [None] * n
    pivots: list[tuple[int, int]] = []
    for i in range(n - 1, -1, -1):
        row = [Fraction(x) for x in g[i]]
        for j, c in pivots:
            f = row[c]
            b[i][j] = f
            if f:
                row = [x - f * y for x, y in zip(row, k[j])]
        best, col = INF, None
        for c in range(n):
            if row[c]:
                v = vp(row[c], p)
                if v < best:
                    best, col = v, c
        if col is None:
            raise SingularMatrixError("matrix is singular")
        piv = row[col]
        b[i][i] = piv
        k[i] = [x / piv for x in row]
        pivots.append((i, col))
    return b, k


def mat_mul_rational(a, b):
    n, m, l = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(m)), Fraction(0)) for j in range(l)] for i in range(n)]


def mat_inverse_rational(a):
    n = len(a)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [r[n:] for r in m]
