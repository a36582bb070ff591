"""Type A_{n-1} root combinatorics for GL_n.

Roots are stored as index pairs (i, j) meaning e_i - e_j, 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DomainError, InvalidRankError


@dataclass(frozen=True, order=True)
class Root:
    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j or self.i < 0 or self.j < 0:
            raise DomainError(f"not a root: e_{self.i} - e_{self.j}")

    @property
    def positive(self) -> bool:
        return self.i < self.j

    def __neg__(self) -> "Root":
        return Root(self.j, self.i)

    def vector(self, n: int) -> tuple[int, ...]:
        v = [0] * n
        v[self.i] += 1
        v[self.j] -= 1
        return tuple(v)

    def __str__(self):
        return f"e{self.i + 1}-e{self.j + 1}"


@dataclass(frozen=True)
class RootSystem:
    n: int
    roots: tuple[Root, ...]
    positive_roots: tuple[Root, ...]
    simple_roots: tuple[Root, ...]
    height_table: dict = field(compare=False, hash=False)
    n_alpha: dict = field(compare=False, hash=False)
    d_alpha: dict = field(compare=False, hash=False)

    @property
    def hgt(self) -> int:
        return max(self.height_table.values())

    @property
    def rank(self) -> int:
        return self.n - 1

    def Q_exponent(self) -> Fraction:
        """log_q Q = sum over positive roots of d_alpha * n_alpha (no doubled roots in type A)."""
        return Fraction(sum(self.d_alpha[a] * self.n_alpha[a] for a in self.positive_roots))


@lru_cache(maxsize=None)
def build_root_system(n: int) -> RootSystem:
    if not isinstance(n, int) or n < 2:
        raise InvalidRankError(f"GL_n root system needs n >= 2, got {n!r}")
    roots = tuple(Root(i, j) for i in range(n) for j in range(n) if i != j)
    pos = tuple(r for r in roots if r.i < r.j)
    simple = tuple(Root(i, i + 1) for i in range(n - 1))
    heights = {r: r.j - r.i for r in pos}
    ones = {r: 1 for r in roots}
    return RootSystem(n, roots, pos, simple, heights, dict(ones), dict(ones))


def _coords(x) -> Sequence:
    return getattr(x, "coords", x)


def pairing(x, alpha: Root) -> Fraction:
    c = _coords(x)
    n = len(c)
    if alpha.i >= n or alpha.j >= n:
        raise DomainError(f"root {alpha} does not fit a point with {n} coordinates")
    return Fraction(c[alpha.i]) - Fraction(c[alpha.j])


def height(alpha: Root) -> int:
    if not alpha.positive:
        raise DomainError(f"height is defined on positive roots only, got {alpha}")
    return alpha.j - alpha.i


def root_sum(a: Root, b: Root) -> Root | None:
    """a + b if it is a root, else None."""
    if a.j == b.i and a.i != b.j:
        return Root(a.i, b.j)
    if b.j == a.i and b.i != a.j:
        return Root(b.i, a.j)
    return None
