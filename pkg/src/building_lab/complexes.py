"""Facets of the building near the origin, the coefficient-system chain complex
C_d(Sigma; V) = (+)_sigma V^{U_sigma^(e)}, Euler idempotents and trace sums.

A building facet is stored by its vertex lattices together with a witness
k in K_0 and an apartment facet sigma_0 with k sigma_0 = sigma; then
U_sigma^(e) = k U_{sigma_0}^(e) k^-1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

from .apartment import ApartmentPoint, Facet, ball_complex
from .errors import DomainError, check_guard
from .fields import primitive_root
from .glmodel import VertexLattice, act_vertex, filtration_spec
from .padic import mat_inverse_rational
from .rep import FiniteLevelRep, LinearOperator

# -- building facets -----------------------------------------------------------


@dataclass(frozen=True)
class BuildingFacet:
    vertices: tuple
    base: Facet = field(compare=False, hash=False)
    k: tuple = field(compare=False, hash=False)

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    @property
    def p(self) -> int:
        return self.vertices[0].p

    def faces(self) -> list[frozenset]:
        return [frozenset(s) for r in range(1, len(self.vertices)) for s in _subsets(self.vertices, r)]

    def __str__(self):
        return "{" + ", ".join(str(v) for v in self.vertices) + "}"


def _subsets(vs, r):
    return itertools.combinations(vs, r)


def _sorted(vs) -> tuple:
    return tuple(sorted(vs))


def from_apartment_facet(f: Facet, p: int) -> BuildingFacet:
    n = f.n
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return BuildingFacet(_sorted(VertexLattice.from_apartment(v, p) for v in f.vertices), f, ident)


def apartment_complex(facets, p: int) -> list[BuildingFacet]:
    return [from_apartment_facet(f, p) for f in facets]


def closed_facet(f: Facet, p: int) -> list[BuildingFacet]:
    """A single apartment facet together with all of its faces."""
    return sorted((from_apartment_facet(g, p) for g in f.faces()), key=lambda b: (b.dimension, b.vertices))


def _k0_generators(n: int, p: int) -> list:
    gens = []
    for i in range(n - 1):
        for (a, b) in ((i, i + 1), (i + 1, i)):
            g = [[int(r == s) for s in range(n)] for r in range(n)]
            g[a][b] = 1
            gens.append(g)
    units = [-1, 5] if p == 2 else [primitive_root(p * p, p)]
    for u in units:
        g = [[int(r == s) for s in range(n)] for r in range(n)]
        g[0][0] = u
        gens.append(g)
    return gens


def _mul_int(a, b, mod):
    n = len(a)
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(n)) % mod for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def building_ball(R: int, n: int = 2, p: int = 2) -> tuple:
    """The K_0-orbit of the facets of the apartment ball of radius R."""
    mod = p ** (R + 2)
    gens = _k0_generators(n, p)
    found: dict = {}
    frontier = []
    for f in ball_complex(R, n).facets:
        bf = from_apartment_facet(f, p)
        if bf not in found:
            found[bf] = bf
            frontier.append(bf)
    while frontier:
        nxt = []
        for bf in frontier:
            for g in gens:
                vs = _sorted(act_vertex(g, v) for v in bf.vertices)
                key = BuildingFacet(vs, bf.base, bf.k)
                if key in found:
                    continue
                new = BuildingFacet(vs, bf.base, _mul_int(g, bf.k, mod))
                found[new] = new
                nxt.append(new)
        frontier = nxt
        check_guard(len(found), "building ball facets")
    return tuple(sorted(found.values(), key=lambda f: (f.dimension, f.vertices)))


def ball_vertices(facets) -> set:
    return {v for f in facets for v in f.vertices}


def boundary(f: BuildingFacet) -> list[tuple[int, tuple]]:
    vs = f.vertices
    if len(vs) == 1:
        return []
    return [((-1) ** i, vs[:i] + vs[i + 1:]) for i in range(len(vs))]


def check_face_closed(facets) -> None:
    keys = {f.vertices for f in facets}
    for f in facets:
        for s, g in boundary(f):
            if g not in keys:
                raise DomainError("complex is not closed under faces")


# -- idempotents per facet ----------------------------------------------------


def facet_spec(f: BuildingFacet, e, p: int):
    return filtration_spec(f.base, e, p)


def facet_idempotent(f: BuildingFacet, e, rep: FiniteLevelRep) -> LinearOperator:
    key = ("facet", f.vertices, str(e))
    cache = rep._cache
    if key in cache:
        return cache[key]
    base = rep.idempotent(facet_spec(f, e, rep.p))
    n = rep.n
    if all(f.k[i][j] == int(i == j) for i in range(n) for j in range(n)):
        out = base
    else:
        kinv = mat_inverse_rational([[Fraction(x) for x in r] for r in f.k])
        out = rep.act(f.k) @ base @ rep.act(kinv)
    cache[key] = out
    return out


def required_level(facets, e, p: int, extra: int = 0) -> int:
    m = extra
    for f in facets:
        s = facet_spec(f, e, p)
        m = max(m, s.max_finite_exponent())
    return m


# -- chain complex ------------------------------------------------------------


def _int_columns(B: flint.fmpq_mat) -> list[list[int]]:
    cols = []
    for j in range(B.ncols()):
        col = [B[i, j] for i in range(B.nrows())]
        den = 1
        for x in col:
            den = den * int(x.q) // math.gcd(den, int(x.q))
        cols.append([int(x.p) * (den // int(x.q)) for x in col])
    return cols


def _rank_of_blocks(nrows_blocks: int, block: int, columns: list) -> int:
    """columns: list of (list of (row_block, sign), int column vector)."""
    if not columns:
        return 0
    R = nrows_blocks * block
    M = flint.fmpz_mat(R, len(columns))
    for c, (placements, vec) in enumerate(columns):
        for rb, sgn in placements:
            off = rb * block
            for i, x in enumerate(vec):
                if x:
                    M[off + i, c] = sgn * x
    return M.rank()


@dataclass
class ChainComplexData:
    dims: dict
    boundary_ranks: dict
    homology: dict
    vertex_sum_rank: int
    dd_zero: bool
    containment_ok: bool
    n_facets: dict

    @property
    def exact(self) -> bool:
        return all(h == 0 for d, h in self.homology.items() if d > 0)

    @property
    def h0_matches(self) -> bool:
        return self.homology.get(0, 0) == self.vertex_sum_rank

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in self.dims.items())

    def to_json(self) -> dict:
        return {"dims": self.dims, "boundary_ranks": self.boundary_ranks, "homology": self.homology,
                "vertex_sum_rank": self.vertex_sum_rank, "dd_zero": self.dd_zero,
                "containment_ok": self.containment_ok, "facets": self.n_facets,
                "exact": self.exact, "h0_matches": self.h0_matches}


def chain_complex(facets, e, rep: FiniteLevelRep) -> ChainComplexData:
    facets = list(facets)
    check_face_closed(facets)
    phi = rep.field.degree
    D = rep.dim * phi
    by_dim: dict = {}
    for f in facets:
        by_dim.setdefault(f.dimension, []).append(f)
    for d in by_dim:
        by_dim[d].sort(key=lambda f: f.vertices)
    index = {d: {f.vertices: i for i, f in enumerate(fs)} for d, fs in by_dim.items()}
    idem = {f.vertices: facet_idempotent(f, e, rep) for f in facets}
    bases = {k: v.image_basis() for k, v in idem.items()}
    dims = {d: sum(bases[f.vertices].ncols() for f in fs) // phi for d, fs in by_dim.items()}
    # containment of coefficient spaces along faces
    containment = True
    for f in facets:
        B = bases[f.vertices]
        for _, g in boundary(f):
            if idem[g].M * B != B:
                containment = False
    # d o d = 0 on the signed incidence
    dd = True
    for d in sorted(by_dim):
        if d < 2:
            continue
        for f in by_dim[d]:
            acc: dict = {}
            for s1, g in boundary(BuildingFacet(f.vertices, f.base, f.k)):
                for s2, h in boundary(BuildingFacet(g, f.base, f.k)):
                    acc[h] = acc.get(h, 0) + s1 * s2
            dd &= all(v == 0 for v in acc.values())
    ranks = {}
    for d in sorted(by_dim):
        if d == 0:
            continue
        cols = []
        for f in by_dim[d]:
            vecs = _int_columns(bases[f.vertices])
            placements = [(index[d - 1][g], s) for s, g in boundary(f)]
            cols += [(placements, v) for v in vecs]
        r = _rank_of_blocks(len(by_dim[d - 1]), D, cols)
        ranks[d] = r // phi
    top = max(by_dim)
    homology = {}
    for d in range(top + 1):
        homology[d] = dims.get(d, 0) - ranks.get(d, 0) - ranks.get(d + 1, 0)
    vcols = []
    for f in by_dim.get(0, []):
        vcols += [([(0, 1)], v) for v in _int_columns(bases[f.vertices])]
    vrank = _rank_of_blocks(1, D, vcols) // phi
    return ChainComplexData(dims, ranks, homology, vrank, dd, containment,
                            {d: len(fs) for d, fs in by_dim.items()})


# -- Euler idempotent and friends --------------------------------------------


def euler_idempotent(facets, e, rep: FiniteLevelRep) -> LinearOperator:
    u = LinearOperator.zero(rep.field, rep.dim)
    for f in facets:
        t = facet_idempotent(f, e, rep)
        u = u + t if f.dimension % 2 == 0 else u - t
    return u


@dataclass
class EulerReport:
    idempotent: bool
    image_rank: int
    vertex_sum_rank: int
    kills_complement: bool
    kernel_rank: int
    expected_kernel_rank: int

    @property
    def ok(self) -> bool:
        return (self.idempotent and self.image_rank == self.vertex_sum_rank and self.kills_complement
                and self.kernel_rank == self.expected_kernel_rank)

    def to_json(self):
        return dict(self.__dict__, ok=self.ok)


def euler_report(facets, e, rep: FiniteLevelRep) -> EulerReport:
    u = euler_idempotent(facets, e, rep)
    one = rep.identity()
    phi = rep.field.degree
    verts = [f for f in facets if f.dimension == 0]
    cols = []
    for f in verts:
        cols += [([(0, 1)], v) for v in _int_columns(facet_idempotent(f, e, rep).image_basis())]
    vrank = _rank_of_blocks(1, rep.dim * phi, cols) // phi
    kills = all((facet_idempotent(f, e, rep) @ (one - u)).is_zero() for f in verts)
    comp = (one - u).rank()
    return EulerReport(u.is_idempotent(), u.rank(), vrank, kills, comp, rep.dim - vrank)


def _require_ball(facets, radius: int, n: int, p: int) -> None:
    need = {f.vertices for f in building_ball(radius, n, p)}
    have = {f.vertices for f in facets}
    if not need <= have:
        raise DomainError(f"complex does not contain the ball of radius {radius}")


def cancellation_check(r: int, e: int, facets, rep: FiniteLevelRep) -> bool:
    """e_{U_o^(r)} u_Sigma = e_{U_o^(r)} u_{B_{r-e}}."""
    if r < e:
        raise DomainError("need r >= e")
    _require_ball(facets, r - e, rep.n, rep.p)
    eo = rep.idempotent(filtration_spec(ApartmentPoint.origin(rep.n), r, rep.p))
    small = building_ball(r - e, rep.n, rep.p)
    return eo @ euler_idempotent(facets, e, rep) == eo @ euler_idempotent(small, e, rep)


def level_check(rep: FiniteLevelRep, e: int, r: int, facets) -> bool:
    """u_Sigma^(e) is the identity on the image of e_{U_o^(r)}."""
    if r < e:
        raise DomainError("need r >= e")
    _require_ball(facets, r - e, rep.n, rep.p)
    eo = rep.idempotent(filtration_spec(ApartmentPoint.origin(rep.n), r, rep.p))
    return euler_idempotent(facets, e, rep) @ eo == eo


def permutation_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def tau_sigma(gamma, facets, e, rep: FiniteLevelRep) -> tuple:
    """sum over gamma-fixed facets of (-1)^dim eps_sigma tr(pi(gamma) | V^{U_sigma^(e)})."""
    keys = {f.vertices for f in facets}
    total = [Fraction(0)] * rep.field.degree
    g_op = rep.act(gamma)
    for f in facets:
        images = [act_vertex(gamma, v) for v in f.vertices]
        img = _sorted(images)
        if img not in keys:
            raise DomainError("complex is not stable under gamma")
        if img != f.vertices:
            continue
        perm = [f.vertices.index(w) for w in images]
        sign = (-1) ** f.dimension * permutation_sign(perm)
        tr = (g_op @ facet_idempotent(f, e, rep)).trace()
        total = [a + sign * b for a, b in zip(total, tr)]
    return tuple(total)
