"""Concrete model of the GL_n building: congruence specifications for the
filtration subgroups, vertex lattices, flag cosets and double cosets.

Conventions.  Entry (i, j) of a matrix belongs to the root e_i - e_j.  The vertex
with apartment coordinates x is the lattice class of diag(p^{-x_i}) Z_p^n, so its
stabilizer asks v(g_ij) >= x_j - x_i.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .apartment import ApartmentPoint, ExtendedLevel, Facet, as_point, f_star, f_sup
from .errors import DomainError, InsufficientPrecisionError, check_guard
from .padic import INF, PadicMatrix, PadicScalar, mat_mul_rational, vp
from .roots import Root, build_root_system

# -- congruence specifications ----------------------------------------------


def _exp(t: ExtendedLevel):
    return t.ceil()


@dataclass(frozen=True)
class CongruenceSpec:
    """Entrywise congruence conditions: diagonal d_i in 1 + P^{ceil t_i} (units when
    the exponent is 0), off-diagonal (i, j) in P^{ceil t_ij}.  When some diagonal
    exponent is 0 the determinant is also required to be a unit."""

    n: int
    p: int
    diag: tuple
    off: tuple
    tag: str = field(default="", compare=False)

    @property
    def diag_exponents(self) -> tuple:
        return tuple(_exp(t) for t in self.diag)

    @property
    def off_exponents(self) -> tuple:
        return tuple(tuple(None if i == j else _exp(self.off[i][j]) for j in range(self.n))
                     for i in range(self.n))

    def exponent(self, i: int, j: int):
        return self.diag_exponents[i] if i == j else self.off_exponents[i][j]

    def exponent_matrix(self) -> tuple:
        return tuple(tuple(self.exponent(i, j) for j in range(self.n)) for i in range(self.n))

    def root_exponent(self, alpha: Root):
        return self.off_exponents[alpha.i][alpha.j]

    # structure
    def is_factorizable(self) -> bool:
        """Iwahori factorization u^- h u^+ holds with diagonal units."""
        c = self.off_exponents
        a = self.diag_exponents
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if c[i][j] + c[j][i] < max(1, min(a[i], a[j])):
                    return False
        return True

    def closure_violations(self) -> list:
        """Exponent inequalities a group defined this way must satisfy."""
        E = self.exponent_matrix()
        n = self.n
        bad = []
        for i, j, k in itertools.permutations(range(n), 3):
            if E[i][j] > E[i][k] + E[k][j]:
                bad.append(("product", i, j, k))
        for i, j in itertools.permutations(range(n), 2):
            if E[i][i] >= 1 and E[i][i] > E[i][j] + E[j][i]:
                bad.append(("diagonal", i, j))
        return bad

    def contained_in(self, other: "CongruenceSpec") -> bool:
        if (self.n, self.p) != (other.n, other.p):
            return False
        a, b = self.exponent_matrix(), other.exponent_matrix()
        return all(a[i][j] >= b[i][j] for i in range(self.n) for j in range(self.n))

    def is_compact_open_in_K0(self) -> bool:
        return all(x >= 0 for r in self.exponent_matrix() for x in r)

    def contains_level(self, m: int) -> bool:
        """K(m) is contained in the group."""
        return all(x <= m for r in self.exponent_matrix() for x in r)

    def max_finite_exponent(self) -> int:
        return max(x for r in self.exponent_matrix() for x in r if x != INF)

    def levi_blocks(self) -> list[list[int]]:
        c = self.exponent_matrix()
        blocks: list[list[int]] = []
        for i in range(self.n):
            for b in blocks:
                j = b[0]
                if c[i][j] + c[j][i] == 0:
                    b.append(i)
                    break
            else:
                blocks.append([i])
        return blocks

    def restrict(self, part: str) -> "CongruenceSpec":
        """The intersection with the lower unipotent, diagonal or upper unipotent group."""
        inf = ExtendedLevel.inf()
        n = self.n
        off = tuple(tuple(self.off[i][j] if ((part == "lower" and i > j) or (part == "upper" and i < j)) else inf
                          for j in range(n)) for i in range(n))
        diag = self.diag if part == "diag" else (inf,) * n
        return CongruenceSpec(n, self.p, diag, off, f"{self.tag}|{part}")

    # membership
    def contains(self, g: PadicMatrix) -> bool:
        if g.n != self.n or g.p != self.p:
            raise DomainError("matrix does not match the specification")
        a = self.diag_exponents
        det_needed = False
        for i in range(self.n):
            for j in range(self.n):
                x = g[i, j]
                if i == j:
                    if a[i] == 0:
                        det_needed = True
                        if not x.ge_threshold(0):
                            return False
                    elif not (x - 1).ge_threshold(a[i]):
                        return False
                elif not x.ge_threshold(self.off_exponents[i][j]):
                    return False
        if det_needed:
            return g.det_valuation() == 0
        return True

    def contains_rational(self, g) -> bool:
        a = self.diag_exponents
        c = self.off_exponents
        for i in range(self.n):
            for j in range(self.n):
                x = Fraction(g[i][j])
                if i == j:
                    t = vp(x, self.p) if a[i] == 0 else vp(x - 1, self.p)
                    if t < a[i] or (a[i] == 0 and t < 0):
                        return False
                elif vp(x, self.p) < c[i][j]:
                    return False
        if 0 in a:
            return vp(_det(g), self.p) == 0
        return True

    def contains_residue(self, g, M: int) -> bool:
        """Membership of an integer matrix known mod p^M (exponents must be <= M)."""
        a = self.diag_exponents
        c = self.off_exponents
        for i in range(self.n):
            for j in range(self.n):
                if i == j:
                    if a[i] == 0:
                        continue
                    t = min(a[i], M)
                    if (g[i][i] - 1) % self.p ** t:
                        return False
                else:
                    t = min(c[i][j], M)
                    if t > 0 and g[i][j] % self.p ** t:
                        return False
        if 0 in a:
            return _det(g) % self.p != 0
        return True

    # finite quotients
    def order_mod(self, M: int) -> int:
        """|G / (G cap K(M))| for G inside K_0, M >= every finite exponent."""
        if not self.is_compact_open_in_K0():
            raise DomainError("group is not contained in K_0")
        p = self.p
        E = self.exponent_matrix()
        if self.is_factorizable():
            out = 1
            for i in range(self.n):
                for j in range(self.n):
                    out *= _factor_count(p, E[i][j], M, i == j)
            return out
        # parahoric type: Levi blocks over F_p times an Iwahori part
        blocks = self.levi_blocks()
        refined = [list(r) for r in E]
        levi = 1
        for b in blocks:
            levi *= q_factorial(len(b), p)
            for s, i in enumerate(b):
                for j in b[s + 1:]:
                    refined[j][i] += 1
        out = levi
        for i in range(self.n):
            for j in range(self.n):
                out *= _factor_count(p, refined[i][j], M, i == j)
        return out

    def elements_mod(self, M: int) -> list[tuple]:
        """All elements of G mod p^M as integer tuples."""
        check_guard(self.order_mod(M), "spec elements")
        p, n, q = self.p, self.n, self.p ** M
        if self.is_factorizable():
            E = self.exponent_matrix()
            ranges = {}
            for i in range(n):
                for j in range(n):
                    ranges[i, j] = _entry_values(p, E[i][j], M, i == j)
            lows = _unipotent_all(n, p, q, ranges, lower=True)
            highs = _unipotent_all(n, p, q, ranges, lower=False)
            diags = list(itertools.product(*[ranges[i, i] for i in range(n)]))
            out = []
            for L in lows:
                for d in diags:
                    LD = tuple(tuple(L[i][j] * d[j] % q for j in range(n)) for i in range(n))
                    for U in highs:
                        out.append(_mulmod(LD, U, q))
            return out
        E = self.exponent_matrix()
        ranges = [[list(range(0, q, p ** min(E[i][j], M))) if E[i][j] != INF else [int(i == j)]
                   for j in range(n)] for i in range(n)]
        check_guard(math.prod(len(r) for row in ranges for r in row), "matrix scan")
        out = []
        for flat in itertools.product(*[r for row in ranges for r in row]):
            g = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
            if self.contains_residue(g, M):
                out.append(g)
        return out

    def measure_exponents(self):
        """(power of p, number of unit-diagonal factors) for the Haar volume."""
        E = self.exponent_matrix()
        return E

    def __str__(self):
        return self.tag or f"spec{self.exponent_matrix()}"


def _det(g):
    n = len(g)
    if n == 1:
        return g[0][0]
    if n == 2:
        return g[0][0] * g[1][1] - g[0][1] * g[1][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in g[1:]]
        total += (-1) ** j * g[0][j] * _det(minor)
    return total


def _factor_count(p, e, M, diagonal):
    if e == INF:
        return 1
    e = min(e, M)
    if diagonal and e == 0:
        return (p - 1) * p ** (M - 1)
    return p ** (M - e)


def _entry_values(p, e, M, diagonal):
    q = p ** M
    if e == INF:
        return [1] if diagonal else [0]
    if diagonal and e == 0:
        return [u for u in range(q) if u % p]
    if diagonal:
        return list(range(1, q + 1, p ** min(e, M)))
    return list(range(0, q, p ** min(max(e, 0), M))) if e >= 0 else None


def _unipotent_all(n, p, q, ranges, lower):
    slots = [(i, j) for i in range(n) for j in range(n) if (i > j if lower else i < j)]
    out = []
    for vals in itertools.product(*[ranges[s] for s in slots]):
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for (i, j), v in zip(slots, vals):
            m[i][j] = v % q
        out.append(tuple(map(tuple, m)))
    return out


def _mulmod(a, b, q):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) % q for j in range(n)) for i in range(n))


def q_factorial(n: int, p: int) -> int:
    """|GL_n(F_p)| / |B(F_p)| = [n]_p!."""
    out = 1
    for k in range(1, n + 1):
        out *= (p ** k - 1) // (p - 1)
    return out


def gl_order(n: int, p: int, M: int = 1) -> int:
    """|GL_n(Z/p^M)|."""
    out = 1
    for k in range(n):
        out *= p ** n - p ** k
    return out * p ** (n * n * (M - 1))


def _level(e) -> ExtendedLevel:
    e = ExtendedLevel.of(e)
    if e < 0:
        raise DomainError("filtration level must be >= 0")
    return e


def filtration_spec(omega, e, p: int) -> CongruenceSpec:
    """U_Omega^(e): threshold f*_Omega(alpha) + e on the entry of alpha, 0+ + e on the diagonal."""
    e = _level(e)
    pts = omega.points if isinstance(omega, Facet) else ([omega] if isinstance(omega, ApartmentPoint) else [as_point(x) for x in omega])
    n = pts[0].n
    diag = (f_star(pts, None) + e,) * n
    off = tuple(tuple(ExtendedLevel.inf() if i == j else f_star(pts, Root(i, j)) + e for j in range(n))
                for i in range(n))
    return CongruenceSpec(n, p, diag, off, f"U[{_omega_label(omega)}]^({e})")


def parahoric_spec(omega, p: int) -> CongruenceSpec:
    """P_Omega: threshold f_Omega(alpha) on entries, integral diagonal, unit determinant."""
    pts = omega.points if isinstance(omega, Facet) else ([omega] if isinstance(omega, ApartmentPoint) else [as_point(x) for x in omega])
    n = pts[0].n
    diag = (ExtendedLevel.of(0),) * n
    off = tuple(tuple(ExtendedLevel.inf() if i == j else ExtendedLevel.of(f_sup(pts, Root(i, j))) for j in range(n))
                for i in range(n))
    return CongruenceSpec(n, p, diag, off, f"P[{_omega_label(omega)}]")


def _omega_label(omega):
    return str(omega) if isinstance(omega, (Facet, ApartmentPoint)) else "set"


def K0_spec(n: int, p: int) -> CongruenceSpec:
    s = parahoric_spec(ApartmentPoint.origin(n), p)
    return CongruenceSpec(n, p, s.diag, s.off, "K0")


def principal_congruence(n: int, p: int, m: int) -> CongruenceSpec:
    """K(m) = 1 + p^m M_n(Z_p), m >= 1 (equal to U_o^(m-1))."""
    if m < 1:
        raise DomainError("K(m) needs m >= 1")
    lv = ExtendedLevel.of(m)
    return CongruenceSpec(n, p, (lv,) * n, tuple(tuple(ExtendedLevel.inf() if i == j else lv for j in range(n)) for i in range(n)), f"K({m})")


def root_group_spec(n: int, p: int, alpha: Root, r) -> CongruenceSpec:
    inf = ExtendedLevel.inf()
    off = tuple(tuple(ExtendedLevel.of(r) if (i, j) == (alpha.i, alpha.j) else inf for j in range(n)) for i in range(n))
    return CongruenceSpec(n, p, (inf,) * n, off, f"U[{alpha},{r}]")


def torus_spec(n: int, p: int, r) -> CongruenceSpec:
    """H_r for the diagonal torus: entries in 1 + P^{ceil r}."""
    inf = ExtendedLevel.inf()
    lv = ExtendedLevel.of(r)
    return CongruenceSpec(n, p, (lv,) * n, tuple((inf,) * n for _ in range(n)), f"H[{r}]")


def membership(g: PadicMatrix, spec: CongruenceSpec) -> bool:
    return spec.contains(g)


def index_closed_form(big: CongruenceSpec, small: CongruenceSpec) -> int:
    """[big : small] from per-entry volume ratios (both factorizable or both in K_0)."""
    if not small.contained_in(big):
        raise DomainError("small group is not contained in the big one")
    if big.is_compact_open_in_K0() and small.is_compact_open_in_K0():
        M = max(big.max_finite_exponent(), small.max_finite_exponent(), 1)
        if all(x != INF for r in small.exponent_matrix() for x in r):
            return big.order_mod(M) // small.order_mod(M)
    if not (big.is_factorizable() and small.is_factorizable()):
        raise DomainError("closed form needs factorizable groups")
    p = big.p
    A, B = big.exponent_matrix(), small.exponent_matrix()
    out = Fraction(1)
    for i in range(big.n):
        for j in range(big.n):
            a, b = A[i][j], B[i][j]
            if a == b:
                continue
            if b == INF:
                raise DomainError("infinite index")
            if i == j and a == 0:
                out *= (p - 1) * Fraction(p) ** (b - 1)
            else:
                out *= Fraction(p) ** (b - a)
    assert out.denominator == 1
    return int(out)


def quotient_cosets(big: CongruenceSpec, small: CongruenceSpec):
    """(index, representatives of big/small as integer matrices mod p^M)."""
    if not small.contained_in(big):
        raise DomainError("small group is not contained in the big one")
    if not big.is_compact_open_in_K0():
        raise DomainError("representatives are enumerated only inside K_0")
    index = index_closed_form(big, small)
    M = max(small.max_finite_exponent(), 1)
    Eb, Es = big.exponent_matrix(), small.exponent_matrix()
    for i in range(big.n):
        for j in range(big.n):
            if Es[i][j] == INF and Eb[i][j] != INF:
                raise DomainError("small group must contain big cap K(M)")
    check_guard(index, "coset representatives")
    q = big.p ** M
    small_elems = small.elements_mod(M)
    covered = set()
    reps = []
    for g in big.elements_mod(M):
        if g in covered:
            continue
        reps.append(g)
        for s in small_elems:
            covered.add(_mulmod(g, s, q))
    if len(reps) != index:
        raise AssertionError(f"coset enumeration found {len(reps)} classes, closed form {index}")
    return index, reps


def haar_weight(spec: CongruenceSpec) -> Fraction:
    """mu(K) with mu(K_0) = 1."""
    return Fraction(1, index_closed_form(K0_spec(spec.n, spec.p), spec))


def random_element(spec: CongruenceSpec, rng: random.Random, depth: int = 12) -> list[list[Fraction]]:
    """A random rational element of the group (entries truncated to p^depth)."""
    p, n = spec.p, spec.n
    E = spec.exponent_matrix()
    if not spec.is_factorizable():
        while True:
            g = [[Fraction(rng.randrange(p ** depth)) * Fraction(p) ** E[i][j] if E[i][j] != INF else Fraction(int(i == j))
                  for j in range(n)] for i in range(n)]
            if spec.contains_rational(g):
                return g

    def entry(i, j):
        e = E[i][j]
        if e == INF:
            return Fraction(int(i == j))
        if i == j:
            if e == 0:
                u = rng.randrange(p ** depth)
                while u % p == 0:
                    u = rng.randrange(p ** depth)
                return Fraction(u)
            return 1 + Fraction(p) ** e * rng.randrange(p ** depth)
        return Fraction(p) ** e * rng.randrange(p ** depth)

    L = [[entry(i, j) if i > j else Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [[entry(i, i) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    U = [[entry(i, j) if i < j else Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return mat_mul_rational(mat_mul_rational(L, D), U)


def iwahori_factor(g: PadicMatrix, spec: CongruenceSpec):
    """g = u^- h u^+ with each factor in the matching part of spec."""
    if not spec.contains(g):
        raise DomainError("element is not in the group")
    p, n = g.p, g.n
    one = PadicScalar.from_rational(p, 1, g.working_precision())
    zero = PadicScalar.zero(p)
    L = [[one if i == j else zero for j in range(n)] for i in range(n)]
    U = [[one if i == j else zero for j in range(n)] for i in range(n)]
    D = [zero] * n
    for k in range(n):
        s = g[k, k]
        for t in range(k):
            s = s - L[k][t] * D[t] * U[t][k]
        D[k] = s
        dinv = s.inverse()
        for j in range(k + 1, n):
            s = g[k, j]
            for t in range(k):
                s = s - L[k][t] * D[t] * U[t][j]
            U[k][j] = dinv * s
        for i in range(k + 1, n):
            s = g[i, k]
            for t in range(k):
                s = s - L[i][t] * D[t] * U[t][k]
            L[i][k] = s * dinv
    lo = PadicMatrix(p, L)
    h = PadicMatrix(p, [[D[i] if i == j else zero for j in range(n)] for i in range(n)])
    up = PadicMatrix(p, U)
    # the unipotent factors have diagonal 1 by construction; only their
    # off-diagonal entries need certifying
    for part, m in (("lower", lo), ("diag", h), ("upper", up)):
        check = spec.restrict(part)
        if part != "diag":
            check = replace(check, diag=spec.diag)
        if not check.contains(m):
            raise InsufficientPrecisionError(f"{part} factor left the group at this precision")
    return lo, h, up


# -- flag cosets B(Z/p^m) \ GL_n(Z/p^m) --------------------------------------


class FlagSpace:
    """Right cosets of the upper triangular group in GL_n(Z/p^m), with a canonical
    bottom-up echelon representative per coset."""

    def __init__(self, n: int, p: int, m: int):
        if m < 1:
            raise DomainError("flag level must be >= 1")
        self.n, self.p, self.m = n, p, m
        self.q = p ** m
        self.count = flag_count(n, p, m)
        check_guard(self.count, "flag cosets")
        self.reps = self._generate()
        self.index = {r: k for k, r in enumerate(self.reps)}

    def _generate(self):
        n, p, q = self.n, self.p, self.q
        out = []
        for perm in itertools.permutations(range(n)):
            # perm[i] is the pivot column of row i
            slots = []
            for i in range(n):
                below = {perm[j] for j in range(i + 1, n)}
                for t in range(n):
                    if t == perm[i] or t in below:
                        continue
                    slots.append((i, t, t < perm[i]))
            ranges = [range(0, q, p) if left else range(q) for (_, _, left) in slots]
            for vals in itertools.product(*ranges):
                g = [[0] * n for _ in range(n)]
                for i in range(n):
                    g[i][perm[i]] = 1
                for (i, t, _), v in zip(slots, vals):
                    g[i][t] = v
                out.append(tuple(map(tuple, g)))
        out.sort()
        if len(out) != self.count:
            raise AssertionError("flag generation miscounted")
        return out

    def reduce(self, g) -> tuple[tuple, tuple]:
        """(canonical rep, diagonal of b) with g = b * rep mod p^m."""
        n, p, q = self.n, self.p, self.q
        rows = [[x % q for x in r] for r in g]
        pivots = []
        diag = [0] * n
        out = [None] * n
        for i in range(n - 1, -1, -1):
            row = rows[i]
            for j, c in pivots:
                f = row[c]
                if f:
                    row = [(x - f * y) % q for x, y in zip(row, out[j])]
            used = {c for _, c in pivots}
            col = next((c for c in range(n) if c not in used and row[c] % p), None)
            if col is None:
                raise DomainError("matrix is not invertible mod p")
            s = row[col]
            sinv = pow(s, -1, q)
            out[i] = [x * sinv % q for x in row]
            diag[i] = s
            pivots.append((i, col))
        return tuple(map(tuple, out)), tuple(diag)

    def canonical(self, g) -> tuple:
        return self.reduce(g)[0]

    def __len__(self):
        return len(self.reps)


def flag_count(n: int, p: int, m: int) -> int:
    return p ** ((m - 1) * n * (n - 1) // 2) * q_factorial(n, p)


@lru_cache(maxsize=None)
def flag_space(n: int, p: int, m: int) -> FlagSpace:
    return FlagSpace(n, p, m)


def double_coset_count(n: int, p: int, e: int):
    """|B \\ G / K_e| with K_e = U_o^(e) = K(e+1).

    G = B K_0 (Iwasawa), so the double cosets are B(Z/p^{e+1})-orbits on
    GL_n(Z/p^{e+1}), i.e. the flag cosets at level e+1."""
    if e < 0:
        raise DomainError("e must be >= 0")
    check_guard(flag_count(n, p, e + 1), "double cosets")
    fs = flag_space(n, p, e + 1)
    return fs.count, fs.reps


# -- vertex lattices --------------------------------------------------------


def _hnf(cols: list[list[Fraction]], p: int, n: int) -> tuple:
    """Column Hermite form over Z_(p) of the lattice spanned by the columns,
    normalized up to homothety: integral, not inside p Z^n."""
    cols = [[Fraction(x) for x in c] for c in cols if any(x != 0 for x in c)]
    m = min(vp(x, p) for c in cols for x in c if x != 0)
    s = Fraction(p) ** (-m)
    cols = [[x * s for x in c] for c in cols]
    work = cols
    basis = [None] * n
    for i in range(n - 1, -1, -1):
        best, k = INF, None
        for idx, c in enumerate(work):
            if c[i] != 0:
                v = vp(c[i], p)
                if v < best:
                    best, k = v, idx
        if k is None:
            raise DomainError("generators do not span a lattice of full rank")
        piv = work.pop(k)
        scale = Fraction(p) ** best / piv[i]
        piv = [x * scale for x in piv]
        newwork = []
        for c in work:
            if c[i] != 0:
                f = c[i] / piv[i]
                c = [x - f * y for x, y in zip(c, piv)]
            if any(x != 0 for x in c):
                newwork.append(c)
        work = newwork
        basis[i] = piv
    # reduce entries above the diagonal
    for j in range(n):
        for i in range(j - 1, -1, -1):
            x = basis[j][i]
            mod = p ** int(vp(basis[i][i], p))
            r = _residue(x, mod)
            f = (x - r) / basis[i][i]
            basis[j] = [a - f * b for a, b in zip(basis[j], basis[i])]
    return tuple(tuple(int(basis[j][i]) for j in range(n)) for i in range(n))


def _residue(x: Fraction, mod: int) -> int:
    if mod == 1:
        return 0
    return x.numerator * pow(x.denominator, -1, mod) % mod


@dataclass(frozen=True, order=True)
class VertexLattice:
    """Homothety class of a Z_p-lattice, stored as the canonical column Hermite form
    (upper triangular, diagonal p^{a_i}, integral and not inside p Z^n)."""

    p: int
    basis: tuple

    @property
    def n(self) -> int:
        return len(self.basis)

    @classmethod
    def from_generators(cls, p: int, cols, n: int) -> "VertexLattice":
        return cls(p, _hnf([list(c) for c in cols], p, n))

    @classmethod
    def from_matrix(cls, p: int, B) -> "VertexLattice":
        n = len(B)
        return cls.from_generators(p, [[B[i][j] for i in range(n)] for j in range(n)], n)

    @classmethod
    def origin(cls, n: int, p: int) -> "VertexLattice":
        return cls.from_matrix(p, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_apartment(cls, x, p: int) -> "VertexLattice":
        pt = as_point(x)
        c = pt.int_coords()
        n = pt.n
        return cls.from_matrix(p, [[Fraction(p) ** (-c[i]) if i == j else 0 for j in range(n)] for i in range(n)])

    def matrix(self) -> list[list[Fraction]]:
        return [[Fraction(x) for x in r] for r in self.basis]

    def exponents(self) -> tuple:
        return tuple(int(vp(self.basis[i][i], self.p)) for i in range(self.n))

    def apartment_point(self) -> ApartmentPoint | None:
        """Coordinates when the class is an apartment vertex (diagonal basis)."""
        for i in range(self.n):
            for j in range(self.n):
                if i != j and self.basis[i][j] != 0:
                    return None
        a = self.exponents()
        return ApartmentPoint(tuple(-t for t in a))

    def distance_from_origin(self) -> int:
        from .padic import mat_inverse_rational
        inv = mat_inverse_rational(self.matrix())
        worst = min(vp(x, self.p) for r in inv for x in r if x != 0)
        return int(max(0, -worst))

    def neighbours(self) -> list["VertexLattice"]:
        """Classes of lattices strictly between pL and L."""
        n, p = self.n, self.p
        B = self.matrix()
        out = set()
        for W in subspaces(n, p):
            if not W or len(W) == n:
                continue
            gens = [[sum(B[i][k] * w[k] for k in range(n)) for i in range(n)] for w in W]
            gens += [[p * B[i][k] for i in range(n)] for k in range(n)]
            out.add(VertexLattice.from_generators(p, gens, n))
        return sorted(out)

    def __str__(self):
        return "L" + str([list(r) for r in self.basis])


@lru_cache(maxsize=None)
def subspaces(n: int, p: int) -> tuple:
    """All subspaces of F_p^n as tuples of reduced-row-echelon basis vectors."""
    out = [()]
    for k in range(1, n + 1):
        for pivots in itertools.combinations(range(n), k):
            free = [(r, c) for r in range(k) for c in range(n) if c > pivots[r] and c not in pivots]
            for vals in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for r, c in enumerate(pivots):
                    rows[r][c] = 1
                for (r, c), v in zip(free, vals):
                    rows[r][c] = v
                out.append(tuple(tuple(r) for r in rows))
    return tuple(out)


def act_vertex(g, v: VertexLattice) -> VertexLattice:
    """g . [L] = [g L]; g is a rational matrix or a PadicMatrix (its lift is used)."""
    if isinstance(g, PadicMatrix):
        g = g.lift()
    gB = mat_mul_rational([[Fraction(x) for x in r] for r in g], v.matrix())
    return VertexLattice.from_matrix(v.p, gB)


@lru_cache(maxsize=None)
def vertices_in_ball(R: int, n: int = 2, p: int = 2) -> tuple:
    if R < 0:
        raise DomainError("radius must be >= 0")
    o = VertexLattice.origin(n, p)
    seen = {o: 0}
    frontier = [o]
    for d in range(1, R + 1):
        nxt = []
        for v in frontier:
            for w in v.neighbours():
                if w not in seen:
                    seen[w] = d
                    nxt.append(w)
        frontier = nxt
        check_guard(len(seen), "ball vertices")
    return tuple(sorted(seen, key=lambda v: (seen[v], v)))


# -- contracted parabolics --------------------------------------------------


@dataclass(frozen=True)
class ContractedParabolic:
    roots: tuple
    blocks: tuple

    def contains_root(self, alpha: Root) -> bool:
        return alpha in self.roots


def _diag_valuations(gamma, p: int) -> list:
    if isinstance(gamma, PadicMatrix):
        n = gamma.n
        for i in range(n):
            for j in range(n):
                if i != j and not gamma[i, j].is_exact_zero:
                    raise DomainError("element must be diagonal")
        return [gamma[i, i].val() for i in range(n)]
    n = len(gamma)
    for i in range(n):
        for j in range(n):
            if i != j and Fraction(gamma[i][j]) != 0:
                raise DomainError("element must be diagonal")
    return [vp(gamma[i][i], p) for i in range(n)]


def contracted_parabolic(gamma, p: int | None = None) -> ContractedParabolic:
    """P_gamma = {g : gamma^k g gamma^-k bounded as k -> oo} for diagonal gamma."""
    if isinstance(gamma, PadicMatrix):
        p = gamma.p
    v = _diag_valuations(gamma, p)
    n = len(v)
    R = build_root_system(n)
    roots = tuple(a for a in R.roots if v[a.i] - v[a.j] >= 0)
    blocks = {}
    for i, t in enumerate(v):
        blocks.setdefault(t, []).append(i)
    return ContractedParabolic(roots, tuple(tuple(b) for b in blocks.values()))


def conjugation_bounded(gamma, g, p: int, steps: int = 6) -> bool:
    """Whether gamma^k g gamma^-k stays bounded, judged on k = 0..steps: an
    unbounded orbit loses at least one digit per step."""
    n = len(g)
    gk = [[Fraction(x) for x in r] for r in g]
    d = [Fraction(gamma[i][i]) for i in range(n)]
    start = min(vp(x, p) for r in gk for x in r if x != 0)
    end = min(vp(gk[i][j] * (d[i] / d[j]) ** steps, p) for i in range(n) for j in range(n) if gk[i][j] != 0)
    return end > start - steps
