"""Smallest building-ball radius from which the trace sum tau equals chi_{K_s}(gamma)."""

import sys

from building_lab.apartment import ApartmentPoint
from building_lab.complexes import building_ball, required_level, tau_sigma
from building_lab.depth import diag, singular_depth
from building_lab.glmodel import filtration_spec
from building_lab.rep import chi_K, principal_series

CASES = [((1, 3), 2, 0), ((3, 5), 2, 0), ((1, 5), 2, 0), ((1, 2), 3, 0), ((1, 4), 3, 0), ((1, 3), 2, 1)]


def scan(g, p, e, radii=3):
    gamma = diag(g)
    r = int(singular_depth(gamma, e, p).r_split)
    V = principal_series(2, p, None, r + 3)
    target = chi_K(gamma, filtration_spec(ApartmentPoint.origin(2), r, p), V)
    taus = []
    for R in range(radii + 1):
        B = building_ball(R, 2, p)
        W = principal_series(2, p, None, max(required_level(B, e, p), r + 2))
        taus.append(tau_sigma(gamma, B, e, W))
    stable = [R for R in range(radii + 1) if all(t == target for t in taus[R:])]
    return r, target, taus, (min(stable) if stable else None)


def main():
    for g, p, e in CASES:
        r, target, taus, R0 = scan(g, p, e)
        print(f"gamma={g} p={p} e={e} r={r} chi={target[0]} tau={[str(t[0]) for t in taus]} radius={R0}")


if __name__ == "__main__":
    sys.exit(main())
