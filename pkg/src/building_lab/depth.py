"""Singular depth, fixed vertices of torus elements, the commutator solver,
conjugation into the torus and the tree distance d_T.

Group elements are exact rational matrices (lists of Fractions); PadicMatrix
inputs are accepted where the valuation bookkeeping matters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .apartment import ApartmentPoint, as_point
from .errors import DomainError, InsufficientPrecisionError, IrregularElementError
from .glmodel import (VertexLattice, act_vertex, filtration_spec, torus_spec,
                      vertices_in_ball)
from .padic import INF, PadicMatrix, mat_inverse_rational, mat_mul_rational, vp
from .roots import build_root_system

Matrix = list


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def diag(entries) -> Matrix:
    n = len(entries)
    return [[Fraction(entries[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def mul(*ms) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = mat_mul_rational(out, m)
    return out


def inv(m) -> Matrix:
    return mat_inverse_rational(m)


def transpose(m) -> Matrix:
    return [list(r) for r in zip(*m)]


def commutator(a, b) -> Matrix:
    """[a, b] = a b a^-1 b^-1."""
    return mul(a, b, inv(a), inv(b))


def diagonal_entries(gamma, p: int | None = None) -> list:
    if isinstance(gamma, PadicMatrix):
        return [gamma[i, i] for i in range(gamma.n)]
    if gamma and isinstance(gamma[0], (list, tuple)):
        n = len(gamma)
        for i in range(n):
            for j in range(n):
                if i != j and Fraction(gamma[i][j]) != 0:
                    raise DomainError("expected a diagonal element")
        return [Fraction(gamma[i][i]) for i in range(n)]
    return [Fraction(x) for x in gamma]


# -- singular depth ---------------------------------------------------------


@dataclass(frozen=True)
class DepthReport:
    sd_alpha: dict
    sd: float
    regular: bool
    N: float
    r_split: float
    r_general: float
    d_gamma: int = 0
    scope: str = "split"

    def to_json(self) -> dict:
        def j(x):
            return "inf" if x == INF else int(x)
        return {"sd_alpha": {str(a): j(v) for a, v in self.sd_alpha.items()}, "sd": j(self.sd),
                "regular": self.regular, "N": j(self.N), "r_split": j(self.r_split),
                "r_general": j(self.r_general), "d_gamma": self.d_gamma, "scope": self.scope}


def _root_depth(a, b, p):
    """v(a/b - 1), inf when the entries agree."""
    if isinstance(a, Fraction):
        if a == b:
            return INF
        return vp(a / b - 1, p)
    if a == b:
        return INF
    return (a / b - 1).val()


def singular_depth(gamma, e=0, p: int | None = None) -> DepthReport:
    d = diagonal_entries(gamma)
    if isinstance(gamma, PadicMatrix):
        p = gamma.p
    if p is None:
        raise DomainError("prime required")
    n = len(d)
    R = build_root_system(n)
    sd_alpha = {a: _root_depth(d[a.i], d[a.j], p) for a in R.roots}
    sd = max(sd_alpha.values())
    N = max(sd_alpha[a] for a in R.positive_roots)
    regular = sd != INF
    return DepthReport(sd_alpha, sd, regular, N, max(sd, e), max(R.hgt * sd, e))


def sd_of(gamma, p: int):
    return singular_depth(gamma, 0, p).sd


# -- fixed vertices ----------------------------------------------------------


def central_normalize(gamma, p: int) -> Matrix:
    d = diagonal_entries(gamma)
    vals = {vp(x, p) for x in d}
    if len(vals) != 1:
        raise DomainError("element is not compact modulo the centre")
    v = vals.pop()
    return diag([x / Fraction(p) ** v for x in d])


@dataclass
class FixedSetReport:
    radius: int
    vertices: list
    witnesses: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)

    def __contains__(self, v):
        return v in set(self.vertices)

    def __len__(self):
        return len(self.vertices)


def decomposition(v: VertexLattice):
    """v = u . y with u upper unipotent and y an apartment vertex."""
    n, p = v.n, v.p
    a = v.exponents()
    B = v.matrix()
    u = [[B[i][j] / Fraction(p) ** a[j] for j in range(n)] for i in range(n)]
    y = ApartmentPoint(tuple(-t for t in a))
    return u, y


def fixed_vertices(gamma, R: int, p: int, m: int | None = None, n: int | None = None) -> FixedSetReport:
    g = central_normalize(gamma, p)
    n = len(g)
    rep = singular_depth(g, 0, p)
    if m is not None:
        need = R + (0 if rep.sd == INF else rep.sd) + 2
        if m < need:
            raise InsufficientPrecisionError(f"precision {m} below required {need}")
    fixed = [v for v in vertices_in_ball(R, n, p) if act_vertex(g, v) == v]
    out = FixedSetReport(R, fixed)
    for v in fixed:
        out.witnesses[v] = decomposition(v)
    return out


def verify_fixpoint_bounds(gamma, R: int, p: int) -> dict:
    """Per fixed vertex u.y: (b) v(u_a) >= -a(y) - sd_a for simple a, and
    (c) v(u_a) >= -a(y) - hgt(a) N for every positive a."""
    g = central_normalize(gamma, p)
    n = len(g)
    rep = singular_depth(g, 0, p)
    Rs = build_root_system(n)
    fs = fixed_vertices(g, R, p)
    results = {}
    for v in fs.vertices:
        u, y = fs.witnesses[v]
        ok_b = ok_c = True
        for a in Rs.positive_roots:
            x = u[a.i][a.j]
            val = vp(x, p)
            ay = y.coords[a.i] - y.coords[a.j]
            if a in Rs.simple_roots and rep.sd_alpha[a] != INF:
                ok_b &= val >= -ay - rep.sd_alpha[a]
            if rep.N != INF:
                ok_c &= val >= -ay - Rs.height_table[a] * rep.N
        results[v] = (bool(ok_b), bool(ok_c))
    fs.bounds = results
    return results


def hair_stability(gamma, h, R: int, p: int, strict: bool = True) -> bool:
    """Fixed sets of gamma and gamma*h agree when h is deep enough."""
    g = central_normalize(gamma, p)
    n = len(g)
    Rs = build_root_system(n)
    sdg = singular_depth(g, 0, p).sd
    hs = singular_depth(h, 0, p).sd_alpha
    if not all(hs[a] > Rs.hgt * sdg for a in Rs.roots):
        if strict:
            raise DomainError("h is not deep enough for the stability statement")
    gh = mul(g, diag(diagonal_entries(h)))
    return fixed_vertices(g, R, p).vertices == fixed_vertices(gh, R, p).vertices


# -- commutators -------------------------------------------------------------


def solve_commutator(v, gamma, p: int | None = None) -> Matrix:
    """Upper unipotent u with [u, gamma] = v, by induction on the height."""
    d = diagonal_entries(gamma)
    n = len(d)
    for i in range(n):
        if Fraction(v[i][i]) != 1 or any(Fraction(v[i][j]) != 0 for j in range(i)):
            raise DomainError("v must be upper unipotent")
    u = identity(n)
    for h in range(1, n):
        for i in range(n - h):
            j = i + h
            if d[j] == d[i]:
                raise IrregularElementError("gamma is not regular")
            s = sum((Fraction(v[i][k]) * d[k] * u[k][j] for k in range(i + 1, j + 1)), Fraction(0))
            u[i][j] = s / (d[j] - d[i])
    return u


def solve_commutator_lower(v, gamma) -> Matrix:
    """Lower unipotent u with [u, gamma] = v."""
    d = diagonal_entries(gamma)
    D, Dinv = diag(d), diag([1 / x for x in d])
    w = solve_commutator(mul(D, transpose(v), Dinv), d)
    return transpose(inv(w))


# -- conjugation into the torus ---------------------------------------------


def ul_factor(w):
    """w = up * lo * dg with up upper unipotent, lo lower unipotent, dg diagonal."""
    n = len(w)
    J = lambda m: [list(reversed(r)) for r in reversed(m)]
    a = J(w)
    L = identity(n)
    U = [list(map(Fraction, r)) for r in a]
    for k in range(n):
        if U[k][k] == 0:
            raise DomainError("element has no UL factorization")
        for i in range(k + 1, n):
            f = U[i][k] / U[k][k]
            L[i][k] = f
            U[i] = [x - f * y for x, y in zip(U[i], U[k])]
    up = J(L)
    M = J(U)  # lower triangular
    dg = diag([M[i][i] for i in range(n)])
    lo = [[M[i][j] / M[j][j] for j in range(n)] for i in range(n)]
    return up, lo, dg


def truncate(m, p: int, prec: int) -> Matrix:
    """Round every entry p^v u to p^v (u mod p^prec)."""
    out = []
    for r in m:
        row = []
        for x in r:
            x = Fraction(x)
            if x == 0:
                row.append(x)
                continue
            v = vp(x, p)
            y = x / Fraction(p) ** v
            mod = p ** prec
            u = y.numerator * pow(y.denominator, -1, mod) % mod
            row.append(Fraction(p) ** v * u)
        out.append(row)
    return out


def spec_level(g, x, p: int) -> int:
    """Largest e with g in U_x^(e) (capped at 64)."""
    e = -1
    while e < 64 and filtration_spec(x, e + 1, p).contains_rational(g):
        e += 1
    return e


@dataclass(frozen=True)
class ConjugationWitness:
    g: list
    t: list
    target: list
    floor: int
    steps: int


def conjugate_into_torus(y, gamma, x, r: int, p: int, m: int, max_steps: int = 64) -> ConjugationWitness:
    """(g, t) with t in H_{r+} gamma diagonal and g t g^-1 = y modulo U_x^(m-3)."""
    d = diagonal_entries(gamma)
    n = len(d)
    x = as_point(x) if not isinstance(x, ApartmentPoint) else x
    rep = singular_depth(d, 0, p)
    if not rep.regular:
        raise IrregularElementError("gamma is not regular")
    if r < rep.sd:
        raise DomainError("r must be at least sd(gamma)")
    G = diag(d)
    y = [[Fraction(a) for a in row] for row in y]
    if not filtration_spec(x, r, p).contains_rational(mul(y, inv(G))):
        raise DomainError("y is not in U_x^(r) gamma")
    floor = m - 3
    prec = m + 3
    gtot = identity(n)
    cur = y
    for step in range(max_steps):
        w = mul(cur, inv(G))
        up, lo, dg = ul_factor(w)
        y0 = mul(dg, G)
        off_ok = filtration_spec(x, floor, p).contains_rational(mul(up, lo))
        if off_ok:
            t = truncate(diag([y0[i][i] for i in range(n)]), p, prec)
            back = mul(gtot, t, inv(gtot), inv(y))
            if not filtration_spec(x, floor, p).contains_rational(back):
                raise InsufficientPrecisionError("conjugation witness failed its final check")
            if not torus_spec(n, p, r + 1).contains_rational(mul(t, inv(G))) and r + 1 <= floor:
                raise DomainError("torus part left H_{r+} gamma")
            return ConjugationWitness(gtot, t, y, floor, step)
        u_plus = solve_commutator(up, y0)
        u_minus = solve_commutator_lower(lo, y0)
        g1 = mul(u_minus, u_plus)
        gtot = truncate(mul(gtot, g1), p, prec + 2 * n)
        cur = truncate(mul(inv(g1), cur, g1), p, prec + 2 * n)
    raise InsufficientPrecisionError("no convergence before the precision floor")


# -- tree distance ------------------------------------------------------------


def torus_distance(v: VertexLattice) -> int:
    """d_T for GL_2: distance from v to the standard apartment, read off in the
    apartment u.A with v = u.y."""
    if v.n != 2:
        raise DomainError("torus distance is implemented for the tree (n = 2)")
    a1 = v.exponents()[0]
    b = v.basis[0][1]
    if b == 0:
        return 0
    return max(0, a1 - int(vp(b, v.p)))


def apartment_distance_bfs(v: VertexLattice, limit: int = 32) -> int:
    """Graph distance from v to the nearest diagonal lattice class."""
    seen = {v}
    frontier = [v]
    for d in range(limit + 1):
        if any(w.apartment_point() is not None for w in frontier):
            return d
        nxt = []
        for w in frontier:
            for z in w.neighbours():
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    raise DomainError("apartment not reached")


# -- random helpers for tests and drivers -------------------------------------


def random_upper_unipotent(n: int, p: int, m: int, rng: random.Random, lower: bool = False) -> Matrix:
    u = identity(n)
    for i in range(n):
        for j in range(n):
            if (i < j and not lower) or (i > j and lower):
                u[i][j] = Fraction(rng.randrange(p ** m))
    return u
