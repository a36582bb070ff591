"""Standard apartment of GL_n: points, facets, the filtration functions f and f*,
the extended value set, and the combinatorial balls A^b_{S,m}.

A point is stored modulo the diagonal with last coordinate 0.  Vertices are the
integer points.  Facets are stored by their closure vertex sets, which is exact and
hashable; the per-root constraint pattern is derived from the vertices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence

from .errors import DomainError
from .roots import Root, build_root_system, pairing

# -- extended reals ---------------------------------------------------------

FINITE, PLUS, INFINITY = "finite", "finite-plus", "infinity"


@total_ordering
@dataclass(frozen=True)
class ExtendedLevel:
    kind: str = FINITE
    value: Fraction | None = Fraction(0)

    def __post_init__(self):
        if self.kind not in (FINITE, PLUS, INFINITY):
            raise DomainError(f"unknown level kind {self.kind!r}")
        if self.kind == INFINITY:
            object.__setattr__(self, "value", None)
        else:
            object.__setattr__(self, "value", Fraction(self.value))

    @classmethod
    def of(cls, r) -> "ExtendedLevel":
        if isinstance(r, ExtendedLevel):
            return r
        return cls(FINITE, Fraction(r))

    @classmethod
    def plus(cls, r) -> "ExtendedLevel":
        return cls(PLUS, Fraction(r))

    @classmethod
    def inf(cls) -> "ExtendedLevel":
        return cls(INFINITY, None)

    def _key(self):
        if self.kind == INFINITY:
            return (1, 0, 0)
        return (0, self.value, 1 if self.kind == PLUS else 0)

    def __lt__(self, other):
        return self._key() < ExtendedLevel.of(other)._key()

    def __eq__(self, other):
        if not isinstance(other, (ExtendedLevel, int, Fraction)):
            return NotImplemented
        return self._key() == ExtendedLevel.of(other)._key()

    def __hash__(self):
        return hash(self._key())

    def __add__(self, other):
        other = ExtendedLevel.of(other)
        if INFINITY in (self.kind, other.kind):
            return ExtendedLevel.inf()
        kind = PLUS if PLUS in (self.kind, other.kind) else FINITE
        return ExtendedLevel(kind, self.value + other.value)

    __radd__ = __add__

    def scale(self, c) -> "ExtendedLevel":
        c = Fraction(c)
        if c <= 0:
            raise DomainError("extended levels only scale by positive numbers")
        if self.kind == INFINITY:
            return self
        return ExtendedLevel(self.kind, c * self.value)

    def ceil(self) -> int | float:
        """Smallest integer >= r for r finite, smallest integer > r for r+."""
        if self.kind == INFINITY:
            return math.inf
        if self.kind == PLUS:
            return math.floor(self.value) + 1
        return math.ceil(self.value)

    def __str__(self):
        if self.kind == INFINITY:
            return "inf"
        s = str(self.value)
        return s + "+" if self.kind == PLUS else s

    def to_json(self):
        return str(self)


ZERO_PLUS = ExtendedLevel.plus(0)

# -- points -----------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class ApartmentPoint:
    coords: tuple

    def __post_init__(self):
        c = tuple(Fraction(t) for t in self.coords)
        if len(c) < 2:
            raise DomainError("apartment points need n >= 2 coordinates")
        last = c[-1]
        object.__setattr__(self, "coords", tuple(t - last for t in c))

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def origin(cls, n: int) -> "ApartmentPoint":
        return cls((0,) * n)

    def is_vertex(self) -> bool:
        return all(t.denominator == 1 for t in self.coords)

    def int_coords(self) -> tuple[int, ...]:
        if not self.is_vertex():
            raise DomainError(f"{self} is not a vertex")
        return tuple(int(t) for t in self.coords)

    def __add__(self, other):
        return ApartmentPoint(tuple(a + b for a, b in zip(self.coords, _coords(other))))

    def __sub__(self, other):
        return ApartmentPoint(tuple(a - b for a, b in zip(self.coords, _coords(other))))

    def __lt__(self, other):
        return self.coords < other.coords

    def __str__(self):
        return "(" + ",".join(str(t) for t in self.coords) + ")"


def _coords(x):
    return x.coords if isinstance(x, ApartmentPoint) else tuple(Fraction(t) for t in x)


def as_point(x) -> ApartmentPoint:
    return x if isinstance(x, ApartmentPoint) else ApartmentPoint(tuple(x))


# -- facets -----------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class Facet:
    """Open facet given by the integer vertices of its closure, sorted in the
    global (lexicographic) order."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(sorted({as_point(v).int_coords() for v in self.vertices}))
        if not vs:
            raise DomainError("empty facet")
        object.__setattr__(self, "vertices", vs)

    @property
    def n(self) -> int:
        return len(self.vertices[0])

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    @property
    def points(self) -> tuple[ApartmentPoint, ...]:
        return tuple(ApartmentPoint(v) for v in self.vertices)

    def constraints(self) -> dict:
        """Per positive root: ('eq', k) or ('open', k) for the interval (k, k+1)."""
        R = build_root_system(self.n)
        out = {}
        for a in R.positive_roots:
            vals = {v[a.i] - v[a.j] for v in self.vertices}
            lo, hi = min(vals), max(vals)
            if lo == hi:
                out[a] = ("eq", lo)
            elif hi == lo + 1:
                out[a] = ("open", lo)
            else:
                raise DomainError(f"vertex set {self.vertices} is not a facet closure")
        return out

    def constraint_rank(self) -> int:
        import numpy as np

        rows = [a.vector(self.n) for a, (kind, _) in self.constraints().items() if kind == "eq"]
        if not rows:
            return 0
        return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))

    def barycenter(self) -> ApartmentPoint:
        k = len(self.vertices)
        return ApartmentPoint(tuple(Fraction(sum(v[i] for v in self.vertices), k) for i in range(self.n)))

    def faces(self) -> list["Facet"]:
        out = []
        for r in range(1, len(self.vertices) + 1):
            for sub in itertools.combinations(self.vertices, r):
                out.append(Facet(sub))
        return out

    def contains(self, x) -> bool:
        x = as_point(x)
        for a, (kind, k) in self.constraints().items():
            v = pairing(x, a)
            if kind == "eq" and v != k:
                return False
            if kind == "open" and not (k < v < k + 1):
                return False
        return True

    def translate(self, lam: Sequence[int]) -> "Facet":
        return Facet(tuple(tuple(v[i] + lam[i] for i in range(self.n)) for v in self.vertices))

    def __lt__(self, other):
        return (self.dimension, self.vertices) < (other.dimension, other.vertices)

    def __str__(self):
        return "[" + " ".join("(" + ",".join(map(str, v)) + ")" for v in self.vertices) + "]"


def facet_of(x) -> Facet:
    x = as_point(x)
    n = x.n
    R = build_root_system(n)
    cands = [sorted({math.floor(t), math.ceil(t)}) for t in x.coords[:-1]]
    verts = []
    for choice in itertools.product(*cands):
        y = tuple(choice) + (0,)
        ok = True
        for a in R.positive_roots:
            v = pairing(x, a)
            w = y[a.i] - y[a.j]
            if v.denominator == 1:
                ok = w == v
            else:
                ok = math.floor(v) <= w <= math.floor(v) + 1
            if not ok:
                break
        if ok:
            verts.append(y)
    return Facet(tuple(verts))


def standard_chamber(n: int) -> Facet:
    return Facet(tuple(tuple([1] * k + [0] * (n - k)) for k in range(n)))


# -- filtration functions ---------------------------------------------------


def _point_set(omega) -> list[ApartmentPoint]:
    if isinstance(omega, Facet):
        return list(omega.points)
    if isinstance(omega, ApartmentPoint):
        return [omega]
    pts = [as_point(x) for x in omega]
    if not pts:
        raise DomainError("f_star needs a non-empty set")
    return pts


def f_sup(omega, alpha: Root | None) -> Fraction:
    """f_Omega(alpha) = sup over Omega of <x, -alpha>; the zero root gives 0."""
    pts = _point_set(omega)
    if alpha is None:
        return Fraction(0)
    return max(-pairing(x, alpha) for x in pts)


def f_star(omega, alpha: Root | None) -> ExtendedLevel:
    """f*_Omega(alpha): the sup, marked with a plus exactly when alpha is constant on Omega."""
    pts = _point_set(omega)
    if alpha is None:
        return ZERO_PLUS
    vals = [-pairing(x, alpha) for x in pts]
    top = max(vals)
    if min(vals) == top:
        return ExtendedLevel.plus(top)
    return ExtendedLevel.of(top)


# -- sign regions and balls -------------------------------------------------


@dataclass(frozen=True)
class SignRegion:
    m: int
    eps: tuple  # per positive root, in root-system order: '+', '0', '-'
    bounded: bool


def sign_region(facet: Facet, m: int) -> SignRegion:
    R = build_root_system(facet.n)
    eps = []
    zero_rows = []
    for a in R.positive_roots:
        kind, k = facet.constraints()[a]
        lo, hi = (k, k) if kind == "eq" else (k, k + 1)
        if -m <= lo and hi <= m:
            eps.append("0")
            zero_rows.append(a.vector(facet.n))
        elif lo >= m and not (kind == "eq" and k == m):
            eps.append("+")
        else:
            eps.append("-")
    return SignRegion(m, tuple(eps), _rank(zero_rows) == facet.n - 1)


def point_sign_region(x, m: int) -> SignRegion:
    x = as_point(x)
    R = build_root_system(x.n)
    eps, rows = [], []
    for a in R.positive_roots:
        v = pairing(x, a)
        if -m <= v <= m:
            eps.append("0")
            rows.append(a.vector(x.n))
        else:
            eps.append("+" if v > m else "-")
    return SignRegion(m, tuple(eps), _rank(rows) == x.n - 1)


def _rank(rows) -> int:
    import numpy as np

    if not rows:
        return 0
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


@dataclass(frozen=True)
class BallComplex:
    n: int
    m: int
    facets: tuple
    vertices: tuple
    regions: dict = field(compare=False, hash=False)

    def by_dimension(self, d: int) -> list[Facet]:
        return [f for f in self.facets if f.dimension == d]

    def __len__(self):
        return len(self.facets)


def alcoves_in_box(n: int, radius: int) -> Iterable[tuple]:
    for lam in itertools.product(range(-radius, radius + 1), repeat=n - 1):
        base = tuple(lam) + (0,)
        for perm in itertools.permutations(range(n)):
            verts = []
            cur = list(base)
            for k in range(n):
                y = tuple(t - cur[-1] for t in cur)
                verts.append(y)
                cur[perm[k]] += 1
            yield tuple(verts)


@lru_cache(maxsize=None)
def ball_complex(m: int, n: int = 2) -> BallComplex:
    if m < 0:
        raise DomainError("ball radius must be >= 0")
    build_root_system(n)
    radius = (n - 1) * m + 1
    seen = set()
    facets = []
    regions = {}
    for verts in alcoves_in_box(n, radius):
        for r in range(1, n + 1):
            for sub in itertools.combinations(verts, r):
                key = frozenset(sub)
                if key in seen:
                    continue
                seen.add(key)
                f = Facet(sub)
                reg = sign_region(f, m)
                if reg.bounded:
                    facets.append(f)
                    regions[f] = reg
    facets.sort()
    verts = tuple(sorted({v for f in facets for v in f.vertices}))
    return BallComplex(n, m, tuple(facets), verts, regions)


# -- boundary and segments --------------------------------------------------


def boundary_chain(sigma: Facet) -> list[tuple[int, Facet]]:
    """Simplicial boundary under the global vertex order; a vertex has empty boundary."""
    vs = sigma.vertices
    if len(vs) == 1:
        return []
    return [((-1) ** i, Facet(vs[:i] + vs[i + 1:])) for i in range(len(vs))]


def chain_boundary(chain: dict) -> dict:
    out: dict = {}
    for f, c in chain.items():
        for s, g in boundary_chain(f):
            out[g] = out.get(g, 0) + s * c
    return {g: c for g, c in out.items() if c != 0}


def segment_facets(x, z) -> list[Facet]:
    x, z = as_point(x), as_point(z)
    if x.n != z.n:
        raise DomainError("points live in different apartments")
    R = build_root_system(x.n)
    ts = {Fraction(0), Fraction(1)}
    for a in R.positive_roots:
        ax, az = pairing(x, a), pairing(z, a)
        if ax == az:
            continue
        lo, hi = sorted((ax, az))
        for k in range(math.ceil(lo), math.floor(hi) + 1):
            ts.add((k - ax) / (az - ax))
    ts = sorted(ts)
    samples = []
    for t0, t1 in zip(ts, ts[1:]):
        samples += [t0, (t0 + t1) / 2]
    samples.append(ts[-1])
    out: list[Facet] = []
    for t in samples:
        pt = ApartmentPoint(tuple(a + t * (b - a) for a, b in zip(x.coords, z.coords)))
        f = facet_of(pt)
        if not out or out[-1] != f:
            out.append(f)
    return out
