"""Brute-force reference computations, independent of the main library code.

Nothing here uses Hermite forms, flag spaces or operator algebra; every count
is obtained by enumerating a finite set directly."""

from __future__ import annotations

import itertools
from .errors import check_guard


def units(p: int, m: int) -> list[int]:
    q = p ** m
    return [u for u in range(q) if u % p]


def projective_line(p: int, m: int) -> list[tuple[int, int]]:
    """P^1(Z/p^m): unimodular pairs modulo units, as canonical representatives."""
    q = p ** m
    us = units(p, m)
    seen = set()
    reps = []
    for a, b in itertools.product(range(q), repeat=2):
        if a % p == 0 and b % p == 0:
            continue
        if (a, b) in seen:
            continue
        orbit = {(a * u % q, b * u % q) for u in us}
        seen |= orbit
        reps.append(min(orbit))
    return sorted(reps)


def p1_count(p: int, m: int) -> int:
    return len(projective_line(p, m))


def p1_fixed_points(d: tuple[int, int], p: int, m: int) -> int:
    """Points of P^1(Z/p^m) fixed by the diagonal matrix diag(d) acting on rows."""
    q = p ** m
    us = units(p, m)
    count = 0
    for a, b in projective_line(p, m):
        img = (a * d[0] % q, b * d[1] % q)
        if any((a * u % q, b * u % q) == img for u in us):
            count += 1
    return count


def _matmul(a, b, q, n):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) % q for j in range(n)) for i in range(n))


def _det(a, q):
    n = len(a)
    if n == 1:
        return a[0][0] % q
    return sum((-1) ** j * a[0][j] * _det(tuple(r[:j] + r[j + 1:] for r in a[1:]), q) for j in range(n)) % q


def borel_orbits(n: int, p: int, m: int) -> int:
    """Number of left B(Z/p^m)-orbits on GL_n(Z/p^m), by orbit marking."""
    q = p ** m
    check_guard(q ** (n * n), "brute-force group enumeration")
    us = units(p, m)
    upper = [(i, j) for i in range(n) for j in range(n) if i < j]
    borel = []
    for dg in itertools.product(us, repeat=n):
        for off in itertools.product(range(q), repeat=len(upper)):
            b = [[0] * n for _ in range(n)]
            for i in range(n):
                b[i][i] = dg[i]
            for (i, j), x in zip(upper, off):
                b[i][j] = x
            borel.append(tuple(map(tuple, b)))
    seen = set()
    orbits = 0
    for flat in itertools.product(range(q), repeat=n * n):
        g = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        if g in seen or _det(g, q) % p == 0:
            continue
        orbits += 1
        for b in borel:
            seen.add(_matmul(b, g, q, n))
    return orbits


def double_coset_oracle(n: int, p: int, e: int) -> int:
    """|B \\ G / K(e+1)|: P^1 counts for n = 2, orbit marking otherwise."""
    if n == 2:
        return p1_count(p, e + 1)
    return borel_orbits(n, p, e + 1)


# -- tree oracles via submodules ---------------------------------------------------


def _span(a, b, q):
    """Subgroup of (Z/q)^2 generated by a and b."""
    return frozenset(((i * a[0] + j * b[0]) % q, (i * a[1] + j * b[1]) % q)
                     for i in range(q) for j in range(q))


def tree_ball_modules(p: int, R: int) -> list[frozenset]:
    """Lattice classes within distance R of Z_p^2, as submodules M of (Z/p^R)^2
    with M not inside p(Z/p^R)^2 (L = preimage of M, p^R Z^2 <= L <= Z^2).

    Such an M contains a primitive vector a; with a complement a' one has
    M = <a, p^k a'> for some 0 <= k <= R."""
    if R == 0:
        return [frozenset({(0, 0)})]
    q = p ** R
    mods = set()
    for a in projective_line(p, R):
        comp = (0, 1) if a[0] % p else (1, 0)
        for k in range(R + 1):
            mods.add(_span(a, (comp[0] * p ** k % q, comp[1] * p ** k % q), q))
    return sorted(mods, key=lambda s: (len(s), sorted(s)))


def tree_ball_count(p: int, R: int) -> int:
    return len(tree_ball_modules(p, R))


def tree_fixed_count(d: tuple[int, int], p: int, R: int) -> int:
    """Lattice classes within distance R fixed by an integral unit diagonal matrix."""
    q = p ** R
    n = 0
    for M in tree_ball_modules(p, R):
        img = frozenset(((x * d[0]) % q, (y * d[1]) % q) for x, y in M)
        n += img == M
    return n


def tree_ball_formula(p: int, R: int) -> int:
    return 1 + (p + 1) * sum(p ** (k - 1) for k in range(1, R + 1))


# -- invariant dimensions for trivial characters ----------------------------------------


def orbit_count_on_p1(gens, p: int, m: int) -> int:
    """Orbits of the group generated by gens (integer 2x2 matrices acting on rows
    from the right) on P^1(Z/p^m). For the trivial character this is dim V^U."""
    q = p ** m
    pts = projective_line(p, m)
    us = units(p, m)
    canon = {}
    for a, b in pts:
        for u in us:
            canon[(a * u % q, b * u % q)] = (a, b)
    seen = set()
    orbits = 0
    for x in pts:
        if x in seen:
            continue
        orbits += 1
        stack = [x]
        seen.add(x)
        while stack:
            a, b = stack.pop()
            for g in gens:
                y = canon[((a * g[0][0] + b * g[1][0]) % q, (a * g[0][1] + b * g[1][1]) % q)]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return orbits


def principal_congruence_gens(p: int, k: int) -> list:
    s = p ** k
    gens = [((1, s), (0, 1)), ((1, 0), (s, 1)), ((1 + s, 0), (0, 1)), ((1, 0), (0, 1 + s))]
    if p == 2 and k == 1:
        gens += [((-1, 0), (0, 1)), ((1, 0), (0, -1))]
    return gens


def trivial_fixed_trace(d: tuple[int, int], p: int, s: int) -> int:
    """Trace of e_{K(s+1)} pi(gamma) on the unramified principal series for a
    unit diagonal gamma: fixed points of gamma on P^1(Z/p^{s+1})."""
    return p1_fixed_points(d, p, s + 1)
