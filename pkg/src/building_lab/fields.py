"""Exact coefficients and torus characters.

Operators over Q(zeta_N) are stored as rational matrices through the regular
representation: each field entry becomes a phi(N) x phi(N) block.  For N <= 2 the
field is Q itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint
import numpy as np

from .errors import DomainError
from .padic import vp


def euler_phi(N: int) -> int:
    return sum(1 for k in range(1, N + 1) if math.gcd(k, N) == 1)


class CyclotomicField:
    """Q(zeta_N) with power basis 1, zeta, ..., zeta^(phi-1)."""

    def __init__(self, N: int = 1):
        if N < 1:
            raise DomainError("N must be positive")
        self.N = N
        self.rational = N <= 2
        self.degree = 1 if self.rational else euler_phi(N)
        if self.rational:
            self._powers = [np.array([[1 if (k % 2 == 0 or N == 1) else -1]], dtype=np.int64) for k in range(max(N, 1))]
        else:
            coeffs = [int(c) for c in flint.fmpz_poly.cyclotomic(N).coeffs()]
            d = self.degree
            C = np.zeros((d, d), dtype=np.int64)
            for i in range(1, d):
                C[i, i - 1] = 1
            for i in range(d):
                C[i, d - 1] = -coeffs[i]
            pw = [np.eye(d, dtype=np.int64)]
            for _ in range(1, N):
                pw.append(C @ pw[-1])
            self._powers = pw

    def power_block(self, k: int) -> np.ndarray:
        """Multiplication-by-zeta^k matrix."""
        return self._powers[k % len(self._powers)]

    def root(self, k: int, scale=1) -> tuple:
        col = self.power_block(k)[:, 0]
        return tuple(Fraction(int(c)) * Fraction(scale) for c in col)

    def zero(self) -> tuple:
        return (Fraction(0),) * self.degree

    def from_int(self, a) -> tuple:
        return (Fraction(a),) + (Fraction(0),) * (self.degree - 1)

    def element_from_block(self, block) -> tuple:
        return tuple(Fraction(int(block[i, 0].p), int(block[i, 0].q)) if hasattr(block[i, 0], "p")
                     else Fraction(block[i, 0]) for i in range(self.degree))

    def is_rational(self, x: tuple) -> bool:
        return all(c == 0 for c in x[1:])

    def to_rational(self, x: tuple) -> Fraction:
        if not self.is_rational(x):
            raise DomainError("element is not rational")
        return x[0]

    def format(self, x: tuple) -> str:
        if self.is_rational(x):
            return str(x[0])
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(x) if c != 0]
        return " + ".join(terms) or "0"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.N == self.N

    def __hash__(self):
        return hash(("cyclo", self.N))

    def __repr__(self):
        return "QQ" if self.rational else f"QQ(zeta_{self.N})"


@lru_cache(maxsize=None)
def cyclotomic_field(N: int) -> CyclotomicField:
    return CyclotomicField(N)


# -- characters -------------------------------------------------------------


def _units(p: int, d: int) -> list[int]:
    q = p ** d
    return [u for u in range(q) if u % p]


@dataclass(frozen=True)
class ResidueCharacter:
    """A character of (Z/p^d)^x with values zeta_N^table[u]."""

    p: int
    d: int
    N: int
    table: tuple  # sorted (residue, exponent) pairs

    def __post_init__(self):
        if self.d < 0 or self.N < 1:
            raise DomainError("bad character parameters")
        tab = dict(self.table)
        q = self.p ** self.d
        for a in _units(self.p, self.d):
            for b in _units(self.p, self.d):
                if (tab[a] + tab[b] - tab[a * b % q]) % self.N:
                    raise DomainError("table is not multiplicative")

    def exponent(self, u: int) -> int:
        if self.d == 0:
            return 0
        u %= self.p ** self.d
        if u % self.p == 0:
            raise DomainError("character evaluated at a non-unit")
        return dict(self.table)[u]

    def __call__(self, u: int) -> int:
        return self.exponent(u)

    @property
    def conductor_exponent(self) -> int:
        """Smallest t with the character trivial on 1 + p^t (0 when trivial)."""
        tab = dict(self.table)
        if all(k % self.N == 0 for k in tab.values()):
            return 0
        q = self.p ** self.d
        for t in range(1, self.d + 1):
            if all(tab[u] % self.N == 0 for u in range(1, q, self.p ** t) if u % self.p):
                return t
        return self.d

    @property
    def depth(self) -> int:
        return max(self.conductor_exponent - 1, 0)

    @property
    def order(self) -> int:
        g = 0
        for k in dict(self.table).values():
            g = math.gcd(g, k % self.N)
        return self.N // math.gcd(g, self.N) if g else 1

    @classmethod
    def trivial(cls, p: int) -> "ResidueCharacter":
        return cls(p, 0, 1, ((0, 0),))

    @classmethod
    def from_generators(cls, p: int, d: int, N: int, gens: dict) -> "ResidueCharacter":
        """Extend the values on the given generators multiplicatively."""
        q = p ** d
        tab = {1 % q: 0}
        frontier = [1 % q]
        while frontier:
            nxt = []
            for a in frontier:
                for g, k in gens.items():
                    b = a * g % q
                    val = (tab[a] + k) % N
                    if b in tab:
                        if tab[b] != val:
                            raise DomainError("generator values are inconsistent")
                    else:
                        tab[b] = val
                        nxt.append(b)
            frontier = nxt
        if len(tab) != len(_units(p, d)):
            raise DomainError("generators do not generate the unit group")
        return cls(p, d, N, tuple(sorted(tab.items())))


def primitive_root(q: int, p: int) -> int:
    phi = len(_units(p, int(round(math.log(q, p)))))
    for g in range(2, q):
        if g % p == 0:
            continue
        if all(pow(g, phi // r, q) != 1 for r in _prime_factors(phi)):
            return g
    raise DomainError("unit group is not cyclic")


def _prime_factors(n: int) -> list[int]:
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


def quadratic_character(p: int) -> ResidueCharacter:
    """Legendre symbol on F_p^x (p odd): conductor exponent 1, depth 0."""
    if p == 2:
        raise DomainError("F_2^x has no quadratic character")
    g = primitive_root(p, p)
    return ResidueCharacter.from_generators(p, 1, 2, {g: 1})


def depth_one_character(p: int) -> ResidueCharacter:
    """A character of (Z/p^2)^x that is nontrivial on 1 + p: sign on (Z/4)^x for
    p = 2, an order-p character for odd p."""
    if p == 2:
        return ResidueCharacter.from_generators(2, 2, 2, {3: 1})
    g = primitive_root(p * p, p)
    return ResidueCharacter.from_generators(p, 2, p, {g: 1})


@dataclass(frozen=True)
class TorusCharacter:
    """chi(diag(t_i)) = prod omega_i(unit part of t_i) * z_i^{v(t_i)}."""

    p: int
    omegas: tuple
    z: tuple

    def __post_init__(self):
        if len(self.omegas) != len(self.z):
            raise DomainError("need one residue character and one z per coordinate")
        object.__setattr__(self, "z", tuple(Fraction(x) for x in self.z))
        for w in self.omegas:
            if w.p != self.p:
                raise DomainError("character over a different prime")
        if any(x == 0 for x in self.z):
            raise DomainError("z values must be nonzero")

    @classmethod
    def trivial(cls, n: int, p: int) -> "TorusCharacter":
        return cls(p, (ResidueCharacter.trivial(p),) * n, (1,) * n)

    @classmethod
    def first_coordinate(cls, n: int, p: int, omega: ResidueCharacter, z=None) -> "TorusCharacter":
        return cls(p, (omega,) + (ResidueCharacter.trivial(p),) * (n - 1), tuple(z or (1,) * n))

    @property
    def n(self) -> int:
        return len(self.omegas)

    @property
    def N(self) -> int:
        out = 1
        for w in self.omegas:
            out = out * w.N // math.gcd(out, w.N)
        return out

    @property
    def conductor_exponent(self) -> int:
        return max(w.conductor_exponent for w in self.omegas)

    @property
    def depth(self) -> int:
        return max(w.depth for w in self.omegas)

    def on_units(self, units) -> int:
        """Exponent of zeta_N for a diagonal of units."""
        N = self.N
        return sum(w.exponent(u) * (N // w.N) for w, u in zip(self.omegas, units)) % N

    def on_diagonal(self, entries) -> tuple[int, Fraction]:
        """(exponent of zeta_N, rational factor) for rational diagonal entries."""
        N = self.N
        k = 0
        scale = Fraction(1)
        for w, z, t in zip(self.omegas, self.z, entries):
            t = Fraction(t)
            v = vp(t, self.p)
            u = t / Fraction(self.p) ** v
            if w.d:
                mod = self.p ** w.d
                res = u.numerator * pow(u.denominator, -1, mod) % mod
                k += w.exponent(res) * (N // w.N)
            scale *= z ** v
        return k % N, scale

    def label(self) -> str:
        parts = []
        for w, z in zip(self.omegas, self.z):
            parts.append(f"w(d={w.d},N={w.N},ord={w.order})" + (f"z={z}" if z != 1 else ""))
        return "x".join(parts)
