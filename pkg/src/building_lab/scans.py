"""Experiment drivers: the growth table and character constancy scans."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .apartment import ApartmentPoint
from .depth import diag, diagonal_entries, mul, singular_depth
from .errors import DomainError, IrregularElementError, check_guard
from .fields import TorusCharacter
from .glmodel import (act_vertex, double_coset_count, filtration_spec, flag_count, gl_order,
                      random_element, vertices_in_ball)
from .padic import INF, vp
from .rep import FiniteLevelRep, chi_K, principal_series


@dataclass
class GrowthRow:
    e: int
    count: int
    ratio_q: Fraction
    mu: Fraction
    dim_VKe: int | None = None
    m_V: int | None = None
    bound: int | None = None
    C_e: Fraction | None = None
    mu_dim: Fraction | None = None
    orbit_count: int | None = None
    ball_vertices: int | None = None
    within_bound: bool | None = None

    def as_dict(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in
                ((f, getattr(self, f)) for f in GROWTH_FIELDS)}


GROWTH_FIELDS = ["e", "count", "ratio_q", "dim_VKe", "m_V", "bound", "C_e", "mu", "mu_dim",
                 "orbit_count", "ball_vertices", "within_bound"]


def congruence_generators(n: int, p: int, k: int) -> list:
    """Topological generators of K(k) = 1 + p^k M_n(Z_p)."""
    gens = []
    for i in range(n):
        for j in range(n):
            g = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
            g[i][j] += p ** k
            gens.append(g)
    if p == 2 and k == 1:
        for i in range(n):
            g = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
            g[i][i] = Fraction(-1)
            gens.append(g)
    return gens


def vertex_orbit_count(gens, vertices) -> int:
    """Orbits of the group generated by gens on a finite invariant vertex set."""
    vs = set(vertices)
    seen = set()
    orbits = 0
    for v in sorted(vs):
        if v in seen:
            continue
        orbits += 1
        stack = [v]
        seen.add(v)
        while stack:
            w = stack.pop()
            for g in gens:
                z = act_vertex(g, w)
                if z not in vs:
                    raise DomainError("vertex set is not invariant")
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
    return orbits


def growth_table(n: int, p: int, e_max: int, chi: TorusCharacter | None = None,
                 with_dims: bool = True) -> list[GrowthRow]:
    """Double-coset counts per e; with_dims adds dim V^{K_e}, the bound
    m_V (e+1)^{n-1} Q^e with Q = p^{n(n-1)/2}, its constant and mu(K_e) dim V^{K_e}.
    Here K_e = U_o^(e) = K(e+1)."""
    chi = chi or TorusCharacter.trivial(n, p)
    check_guard(flag_count(n, p, e_max + 1), "double cosets")
    if with_dims:
        check_guard(flag_count(n, p, e_max + 2), "principal series model")
    level = chi.depth
    o = ApartmentPoint.origin(n)
    Q = p ** (n * (n - 1) // 2)
    rows = []
    m_V = None
    if with_dims:
        V0 = principal_series(n, p, chi, max(level + 1, chi.conductor_exponent, 1))
        m_V = V0.idempotent(filtration_spec(o, level, p)).rank()
    for e in range(e_max + 1):
        count, _ = double_coset_count(n, p, e)
        row = GrowthRow(e, count, Fraction(count, p ** (e * n * (n - 1) // 2)),
                        Fraction(1, gl_order(n, p, e + 1)))
        if with_dims:
            V = principal_series(n, p, chi, max(e + 2, chi.conductor_exponent))
            row.dim_VKe = V.idempotent(filtration_spec(o, e, p)).rank()
            row.m_V = m_V
            row.bound = m_V * (e + 1) ** (n - 1) * Q ** e
            row.C_e = Fraction(row.dim_VKe, row.bound)
            row.mu_dim = row.mu * row.dim_VKe
            row.within_bound = row.dim_VKe <= row.bound
        if e >= level and n == 2:
            verts = vertices_in_ball(e - level, n, p)
            row.ball_vertices = len(verts)
            row.orbit_count = vertex_orbit_count(congruence_generators(n, p, e + 1), verts)
        rows.append(row)
    return rows


# -- character scans ---------------------------------------------------------------


@dataclass
class ConstancyReport:
    gamma: list
    compact: bool
    r_split: float
    r_general: float
    s_values: dict = field(default_factory=dict)
    slice_values: dict = field(default_factory=dict)
    conj_values: dict = field(default_factory=dict)
    constant: bool = True
    stable_from: int | None = None
    n_slice: int = 0
    n_conj: int = 0

    def to_json(self) -> dict:
        def fe(x):
            return [str(c) for c in x] if len(x) > 1 else str(x[0])
        return {"gamma": [str(x) for x in self.gamma], "compact": self.compact,
                "r_split": "inf" if self.r_split == INF else int(self.r_split),
                "r_general": "inf" if self.r_general == INF else int(self.r_general),
                "chi_Ks": {s: fe(v) for s, v in self.s_values.items()},
                "slice_distinct": {s: sorted({str(fe(x)) for x in v}) for s, v in self.slice_values.items()},
                "conj_distinct": {s: sorted({str(fe(x)) for x in v}) for s, v in self.conj_values.items()},
                "n_slice": self.n_slice, "n_conj": self.n_conj,
                "constant": self.constant, "stable_from": self.stable_from}


def torus_slice(n: int, p: int, r: int, m: int, budget: int, rng: random.Random) -> list:
    """Representatives h of (H_{r+} cap T) / (1 + p^m): entries 1 + p^{r+1} t mod p^m."""
    step = p ** (r + 1)
    per = list(range(1, p ** m + 1, step)) if r + 1 < m else [1]
    total = len(per) ** n
    if total <= budget:
        return [list(t) for t in itertools.product(per, repeat=n)]
    return [[rng.choice(per) for _ in range(n)] for _ in range(budget)]


def stable_from(values: dict):
    keys = sorted(values)
    if not keys:
        return None
    last = values[keys[-1]]
    s0 = keys[-1]
    for s in reversed(keys):
        if values[s] != last:
            break
        s0 = s
    return s0


def character_scan(gamma, e: int, rep: FiniteLevelRep, s_values=None, samples: int = 256,
                   seed: int = 0, conj_samples: int = 16) -> ConstancyReport:
    p, n, m = rep.p, rep.n, rep.m
    d = diagonal_entries(gamma)
    G = diag(d)
    dr = singular_depth(d, e, p)
    if not dr.regular:
        raise IrregularElementError("gamma is irregular")
    compact = len({vp(x, p) for x in d}) == 1
    r = int(dr.r_split)
    o = ApartmentPoint.origin(n)
    if s_values is None:
        s_values = range(0, m)
    rng = random.Random(seed)
    rep_out = ConstancyReport(d, compact, dr.r_split, dr.r_general)
    for s in s_values:
        rep_out.s_values[s] = chi_K(G, filtration_spec(o, s, p), rep)
    rep_out.stable_from = stable_from(rep_out.s_values)
    if compact:
        hs = torus_slice(n, p, r, m, samples, rng)
        rep_out.n_slice = len(hs)
        U = filtration_spec(o, r, p)
        conj = [(random_element(U, rng, m), random_element(U, rng, m)) for _ in range(conj_samples)]
        rep_out.n_conj = len(conj)
        for s in s_values:
            K = filtration_spec(o, s, p)
            vals = [chi_K(mul(G, diag(h)), K, rep) for h in hs]
            rep_out.slice_values[s] = vals
            cvals = [chi_K(mul(u, G, u2), K, rep) for u, u2 in conj]
            rep_out.conj_values[s] = cvals
            base = rep_out.s_values[s]
            if any(v != base for v in vals) or any(v != base for v in cvals):
                rep_out.constant = False
    else:
        vals = [rep_out.s_values[s] for s in sorted(rep_out.s_values)]
        rep_out.constant = all(v == vals[-1] for v in vals)
    return rep_out
