"""Finite-level model of the principal series Ind_B^G(chi) (unnormalized).

V^{K(m)} is identified with functions f on the flag cosets B(Z/p^m) \\ GL_n(Z/p^m)
via their values at the canonical representatives y.  The operator of g sends f to
y -> f(y g); writing y g = b k (Iwasawa) and k = b' x mod p^m gives
f(y g) = chi(b) chi(b') f(x).  Matrices act on coefficient columns, so T_g T_h = T_gh.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import flint
import numpy as np

from .errors import DomainError, InsufficientPrecisionError, check_guard
from .fields import CyclotomicField, TorusCharacter, cyclotomic_field
from .glmodel import (CongruenceSpec, FlagSpace, _det, filtration_spec, flag_space)
from .padic import INF, iwasawa_rational, mat_inverse_rational, vp
from .roots import Root, build_root_system

# -- linear operators ---------------------------------------------------------


class LinearOperator:
    """Exact operator on a model, stored as a rational matrix in the regular
    representation of the coefficient field."""

    def __init__(self, field: CyclotomicField, M: flint.fmpq_mat):
        self.field = field
        self.M = M

    @property
    def size(self) -> int:
        return self.M.nrows() // self.field.degree

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.field, self.M * other.M)

    def __add__(self, other):
        return LinearOperator(self.field, self.M + other.M)

    def __sub__(self, other):
        return LinearOperator(self.field, self.M - other.M)

    def __neg__(self):
        return LinearOperator(self.field, -self.M)

    def scale(self, c) -> "LinearOperator":
        c = Fraction(c)
        return LinearOperator(self.field, self.M * flint.fmpq(c.numerator, c.denominator))

    def __eq__(self, other):
        return isinstance(other, LinearOperator) and self.M == other.M

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.M.entries())

    def rank(self) -> int:
        r = self.M.rank()
        assert r % self.field.degree == 0
        return r // self.field.degree

    def trace(self) -> tuple:
        d = self.field.degree
        acc = [Fraction(0)] * d
        for y in range(self.size):
            for i in range(d):
                x = self.M[y * d + i, y * d]
                acc[i] += Fraction(int(x.p), int(x.q))
        return tuple(acc)

    def is_idempotent(self) -> bool:
        return self.M * self.M == self.M

    def image_basis(self) -> flint.fmpq_mat:
        """Columns spanning the image (a Q-basis of the embedded K-subspace)."""
        R, r = self.M.transpose().rref()
        rows = [[R[i, j] for j in range(R.ncols())] for i in range(r)]
        if not rows:
            return flint.fmpq_mat(self.M.nrows(), 0)
        return flint.fmpq_mat(rows).transpose()

    @classmethod
    def identity(cls, field: CyclotomicField, size: int) -> "LinearOperator":
        D = size * field.degree
        M = flint.fmpq_mat(D, D)
        for i in range(D):
            M[i, i] = 1
        return cls(field, M)

    @classmethod
    def zero(cls, field: CyclotomicField, size: int) -> "LinearOperator":
        D = size * field.degree
        return cls(field, flint.fmpq_mat(D, D))


@dataclass
class Monomial:
    """Row y has a single entry at column target[y]: zeta^zexp[y] * scale[y]."""

    target: np.ndarray
    zexp: np.ndarray
    scale: list | None = None

    def compose(self, other: "Monomial", N: int) -> "Monomial":
        t = other.target[self.target]
        z = (self.zexp + other.zexp[self.target]) % N
        if self.scale is None and other.scale is None:
            s = None
        else:
            a = self.scale or [Fraction(1)] * len(t)
            b = other.scale or [Fraction(1)] * len(t)
            s = [a[y] * b[self.target[y]] for y in range(len(t))]
        return Monomial(t, z, s)

    def fixed_rows(self) -> list[int]:
        return [y for y in range(len(self.target)) if self.target[y] == y]


class _Accumulator:
    def __init__(self, field: CyclotomicField, size: int):
        self.field = field
        self.size = size
        d = field.degree
        self.arr = np.zeros((size * d, size * d), dtype=np.int64)
        self.den = 1
        self.blocks = np.array([field.power_block(k) for k in range(max(field.N, 1))], dtype=np.int64)

    def add(self, mono: Monomial, weight: int = 1):
        d = self.field.degree
        y = np.arange(self.size)
        vals = self.blocks[mono.zexp % len(self.blocks)] * weight
        if mono.scale is not None:
            den = 1
            for c in mono.scale:
                den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
            lcm = self.den * den // math.gcd(self.den, den)
            if lcm != self.den:
                self.arr *= lcm // self.den
                self.den = lcm
            mult = np.array([int(Fraction(c) * self.den) for c in mono.scale], dtype=np.int64)
            vals = vals * mult[:, None, None]
        elif self.den != 1:
            vals = vals * self.den
        a = np.arange(d)
        rows = (y[:, None, None] * d + a[None, :, None]).repeat(d, axis=2)
        cols = (mono.target[:, None, None] * d + a[None, None, :]).repeat(d, axis=1)
        np.add.at(self.arr, (rows, cols), vals)

    def operator(self, divisor: int = 1) -> LinearOperator:
        D = self.arr.shape[0]
        M = flint.fmpq_mat(D, D, [int(x) for x in self.arr.ravel()])
        den = self.den * divisor
        if den != 1:
            M = M * flint.fmpq(1, den)
        return LinearOperator(self.field, M)


def _to_operator(field, mono: Monomial) -> LinearOperator:
    acc = _Accumulator(field, len(mono.target))
    acc.add(mono)
    return acc.operator()


# -- the model -----------------------------------------------------------------


def _elementary(n, i, j, x):
    g = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    g[i][j] = Fraction(x)
    return g


def _int_mat(g, q):
    """Residue mod q of a p-integral rational matrix."""
    out = []
    for r in g:
        row = []
        for x in r:
            x = Fraction(x)
            row.append(x.numerator * pow(x.denominator, -1, q) % q)
        out.append(tuple(row))
    return tuple(out)


class FiniteLevelRep:
    def __init__(self, n: int, p: int, chi: TorusCharacter, m: int):
        if m < 1:
            raise DomainError("model level must be >= 1")
        if chi.p != p or chi.n != n:
            raise DomainError("character does not match (n, p)")
        if chi.conductor_exponent > m:
            raise DomainError("character depth exceeds the model level")
        self.n, self.p, self.chi, self.m = n, p, chi, m
        self.q = p ** m
        self.flags: FlagSpace = flag_space(n, p, m)
        self.field = cyclotomic_field(chi.N)
        self.basis = self._surviving()
        if len(self.basis) != len(self.flags.reps):
            raise AssertionError("a coset failed the compatibility test despite conductor <= m")
        self._cache: dict = {}

    def _surviving(self):
        # chi has to be trivial on B cap y K(m) y^-1 = B cap K(m), tested on diagonal generators
        for i in range(self.n):
            t = [1] * self.n
            t[i] = 1 + self.q
            if self.chi.on_diagonal(t)[0] != 0:
                return []
        return list(self.flags.reps)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def level(self) -> int:
        """Level of the representation: the depth of chi."""
        return self.chi.depth

    def label(self) -> str:
        return f"Ind(n={self.n},p={self.p},chi={self.chi.label()},m={self.m})"

    # monomial operators
    def monomial_k0(self, k) -> Monomial:
        """Operator of k in GL_n(Z_p), given by any integer/rational lift."""
        key = ("k0", _int_mat(k, self.q))
        if key in self._cache:
            return self._cache[key]
        kk = key[1]
        if _det(kk) % self.p == 0:
            raise DomainError("element is not in K_0")
        n, q = self.n, self.q
        tgt = np.zeros(self.dim, dtype=np.int64)
        z = np.zeros(self.dim, dtype=np.int64)
        for idx, y in enumerate(self.basis):
            yk = tuple(tuple(sum(y[i][t] * kk[t][j] for t in range(n)) % q for j in range(n)) for i in range(n))
            rep, dg = self.flags.reduce(yk)
            tgt[idx] = self.flags.index[rep]
            z[idx] = self.chi.on_units(dg)
        mono = Monomial(tgt, z)
        self._cache[key] = mono
        return mono

    def monomial(self, g) -> Monomial:
        """Operator of a rational group element through the Iwasawa decomposition.
        Only meaningful on vectors whose functions are invariant under g^-1 K(m) g."""
        g = [[Fraction(x) for x in r] for r in g]
        if all(vp(x, self.p) >= 0 for r in g for x in r if x != 0) and vp(_det(g), self.p) == 0:
            return self.monomial_k0(g)
        n, q = self.n, self.q
        tgt = np.zeros(self.dim, dtype=np.int64)
        z = np.zeros(self.dim, dtype=np.int64)
        scale = []
        N = self.field.N
        for idx, y in enumerate(self.basis):
            yg = [[sum((Fraction(y[i][t]) * g[t][j] for t in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
            b, k = iwasawa_rational(yg, self.p)
            zb, sb = self.chi.on_diagonal([b[i][i] for i in range(n)])
            rep, dg = self.flags.reduce(_int_mat(k, q))
            tgt[idx] = self.flags.index[rep]
            z[idx] = (zb + self.chi.on_units(dg)) % N
            scale.append(sb)
        return Monomial(tgt, z, None if all(s == 1 for s in scale) else scale)

    def act(self, g) -> LinearOperator:
        return _to_operator(self.field, self.monomial(g))

    def identity(self) -> LinearOperator:
        return LinearOperator.identity(self.field, self.dim)

    # averages
    def cyclic_average(self, gen) -> LinearOperator:
        """Average of the powers of a K_0 element of p-power order mod p^m."""
        base = self.monomial_k0(gen)
        acc = _Accumulator(self.field, self.dim)
        ident = Monomial(np.arange(self.dim), np.zeros(self.dim, dtype=np.int64))
        cur = ident
        count = 0
        while True:
            acc.add(cur)
            count += 1
            cur = cur.compose(base, self.field.N)
            if np.array_equal(cur.target, ident.target) and not cur.zexp.any():
                break
            check_guard(count, "cyclic average")
        return acc.operator(count)

    def root_group_average(self, alpha: Root, c: int) -> LinearOperator:
        """Average over U_{alpha,c} / U_{alpha,m}, c >= 0."""
        if c < 0:
            raise DomainError("root group is not inside K_0")
        if c >= self.m:
            return self.identity()
        key = ("root", alpha, c)
        if key not in self._cache:
            self._cache[key] = self.cyclic_average(_elementary(self.n, alpha.i, alpha.j, self.p ** c))
        return self._cache[key]

    def torus_average(self, exps) -> LinearOperator:
        """Average over the diagonal group with entry i in 1 + P^{exps[i]} (units for 0)."""
        key = ("torus", tuple(exps))
        if key in self._cache:
            return self._cache[key]
        out = self.identity()
        for i, a in enumerate(exps):
            if a == INF or a >= self.m:
                continue
            acc = _Accumulator(self.field, self.dim)
            count = 0
            start = 1 if a == 0 else 1
            step = self.p ** a if a > 0 else 1
            for u in range(start, self.q + 1, step):
                if u % self.p == 0:
                    continue
                t = [[int(r == s) for s in range(self.n)] for r in range(self.n)]
                t[i][i] = u % self.q
                acc.add(self.monomial_k0(t))
                count += 1
            out = out @ acc.operator(count)
        self._cache[key] = out
        return out

    def factorized_average(self, spec: CongruenceSpec) -> LinearOperator:
        """e_U for U inside K_0 with an Iwahori factorization: lower roots, torus, upper roots."""
        R = build_root_system(self.n)
        E = spec.exponent_matrix()
        out = self.identity()
        for a in R.roots:
            if not a.positive and E[a.i][a.j] != INF:
                out = out @ self.root_group_average(a, E[a.i][a.j])
        out = out @ self.torus_average([E[i][i] for i in range(self.n)])
        for a in R.positive_roots:
            if E[a.i][a.j] != INF:
                out = out @ self.root_group_average(a, E[a.i][a.j])
        return out

    def idempotent(self, spec: CongruenceSpec) -> LinearOperator:
        key = ("idem", spec.exponent_matrix())
        if key in self._cache:
            return self._cache[key]
        if (spec.n, spec.p) != (self.n, self.p):
            raise DomainError("specification does not match the model")
        if not spec.contains_level(self.m):
            raise InsufficientPrecisionError(f"{spec} does not contain K({self.m}); raise the model level")
        if spec.is_compact_open_in_K0():
            if spec.is_factorizable():
                out = self.factorized_average(spec)
            else:
                out = self._levi_average(spec)
        else:
            out = self._noncompact_average(spec)
        self._cache[key] = out
        return out

    def _levi_average(self, spec: CongruenceSpec) -> LinearOperator:
        """e_K = avg over K/J of pi(k) e_J with J = K cap K(1)."""
        n, p = self.n, self.p
        E = spec.exponent_matrix()
        J = _raise_exponents(spec, 1)
        eJ = self.factorized_average(J)
        slots = [(i, j) for i in range(n) for j in range(n) if E[i][j] == 0]
        check_guard(p ** len(slots), "Levi enumeration")
        acc = _Accumulator(self.field, self.dim)
        count = 0
        for vals in itertools.product(range(p), repeat=len(slots)):
            k = [[0] * n for _ in range(n)]
            for (i, j), v in zip(slots, vals):
                k[i][j] = v
            if _det(k) % p == 0:
                continue
            acc.add(self.monomial_k0(k))
            count += 1
        return acc.operator(count) @ eJ

    def _noncompact_average(self, spec: CongruenceSpec) -> LinearOperator:
        if self.n != 2:
            raise DomainError("groups outside K_0 are supported for n = 2 only")
        E = spec.exponent_matrix()
        neg = [(i, j) for i in range(2) for j in range(2) if i != j and E[i][j] < 0]
        if len(neg) != 1 or any(E[i][i] < 0 for i in range(2)):
            raise DomainError("unsupported group shape")
        (i, j), = neg
        c = E[i][j]
        inner = self.factorized_average(_raise_exponents(spec, 0))
        acc = _Accumulator(self.field, self.dim)
        count = p_pow = self.p ** (-c)
        for t in range(p_pow):
            acc.add(self.monomial(_elementary(2, i, j, Fraction(t) * Fraction(self.p) ** c)))
        return acc.operator(count) @ inner

    # traces
    def check_trace_window(self, gamma, spec: CongruenceSpec) -> None:
        """tr(e_K pi(gamma)) needs gamma^-1 K(m) gamma inside K."""
        g = [[Fraction(x) for x in r] for r in gamma]
        gi = mat_inverse_rational(g)
        v1 = min(vp(x, self.p) for r in g for x in r if x != 0)
        v2 = min(vp(x, self.p) for r in gi for x in r if x != 0)
        need = max(x for r in spec.exponent_matrix() for x in r if x != INF)
        if self.m + v1 + v2 < need:
            raise InsufficientPrecisionError(
                f"model level {self.m} too small for this element and {spec} (need {need - v1 - v2})")


def _raise_exponents(spec: CongruenceSpec, floor: int) -> CongruenceSpec:
    from .apartment import ExtendedLevel

    n = spec.n
    E = spec.exponent_matrix()
    diag = tuple(ExtendedLevel.of(max(E[i][i], floor)) if E[i][i] != INF else ExtendedLevel.inf() for i in range(n))
    off = tuple(tuple(ExtendedLevel.inf() if (i == j or E[i][j] == INF) else ExtendedLevel.of(max(E[i][j], floor))
                      for j in range(n)) for i in range(n))
    return CongruenceSpec(n, spec.p, diag, off, f"{spec.tag}>= {floor}")


def principal_series(n: int, p: int, chi: TorusCharacter | None = None, m: int = 1) -> FiniteLevelRep:
    return FiniteLevelRep(n, p, chi or TorusCharacter.trivial(n, p), m)


def idempotent_op(spec: CongruenceSpec, rep: FiniteLevelRep) -> LinearOperator:
    return rep.idempotent(spec)


def act(gamma, rep: FiniteLevelRep) -> LinearOperator:
    return rep.act(gamma)


def chi_K(gamma, spec: CongruenceSpec, rep: FiniteLevelRep) -> tuple:
    """tr(e_K pi(gamma)) as a field element."""
    rep.check_trace_window(gamma, spec)
    e = rep.idempotent(spec)
    return (e @ rep.act(gamma) @ e).trace()


def invariants_dim(omega, e, rep: FiniteLevelRep) -> int:
    return rep.idempotent(filtration_spec(omega, e, rep.p)).rank()
