"""The acceptance checks, one function per criterion, each returning a record."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .apartment import ApartmentPoint, Facet, ball_complex
from .complexes import (apartment_complex, building_ball, cancellation_check, chain_complex,
                        closed_facet, euler_report, level_check, required_level, tau_sigma)
from .depth import (conjugate_into_torus, diag, fixed_vertices, hair_stability, inv, mul,
                    solve_commutator, solve_commutator_lower, commutator, random_upper_unipotent,
                    sd_of, singular_depth, spec_level, torus_distance, verify_fixpoint_bounds)
from .errors import BuildingLabError
from .fields import TorusCharacter, depth_one_character
from .glmodel import double_coset_count, filtration_spec, random_element, torus_spec
from .oracles import (double_coset_oracle, orbit_count_on_p1, principal_congruence_gens,
                      tree_ball_count, tree_fixed_count, trivial_fixed_trace)
from .rep import chi_K, principal_series
from .scans import growth_table, torus_slice

EXACT = "exact-enumeration"
OPERATOR = "operator-identity"


def sampled(seed: int, budget: int) -> str:
    return f"sampled(seed={seed}, budget={budget})"


@dataclass
class CriterionResult:
    id: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    provenance: str = EXACT
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


def _model_level(needed: int, precision: int | None) -> int:
    return needed if precision is None else precision


def characters(p: int) -> dict:
    return {"trivial": TorusCharacter.trivial(2, p),
            "depth1": TorusCharacter.first_coordinate(2, p, depth_one_character(p))}


def _fmt(x):
    if isinstance(x, tuple):
        return [str(c) for c in x] if len(x) > 1 else str(x[0])
    return str(x)


# -- 1 ----------------------------------------------------------------------


def criterion_1(precision: int | None = None) -> CriterionResult:
    rows, ok = [], True
    for n, p, emax in ((2, 2, 3), (2, 3, 3), (3, 2, 1)):
        for e in range(emax + 1):
            count, _ = double_coset_count(n, p, e)
            oracle = double_coset_oracle(n, p, e)
            ratio = Fraction(count, p ** (e * n * (n - 1) // 2))
            rows.append({"n": n, "p": p, "e": e, "count": count, "oracle": oracle, "ratio_q": str(ratio)})
            ok &= count == oracle
    return CriterionResult(1, "double-coset counts", ok, {"rows": rows})


# -- 2 and 3 ------------------------------------------------------------------


def complexes_for(p: int) -> list[tuple[str, list]]:
    out = []
    origin = Facet(((0, 0),))
    edge = Facet(((0, 0), (1, 0)))
    out.append(("vertex", closed_facet(origin, p)))
    out.append(("edge", closed_facet(edge, p)))
    for R in range(3):
        out.append((f"apartment-ball-{R}", apartment_complex(ball_complex(R, 2).facets, p)))
    for R in range(3):
        out.append((f"building-ball-{R}", list(building_ball(R, 2, p))))
    return out


def _grid(precision, check):
    rows, ok = [], True
    for p in (2, 3):
        for cname, chi in characters(p).items():
            for e in (0, 1):
                for label, facets in complexes_for(p):
                    m = _model_level(max(required_level(facets, e, p), chi.conductor_exponent, 1), precision)
                    V = principal_series(2, p, chi, m)
                    row = {"p": p, "chi": cname, "e": e, "complex": label, "m": m}
                    good, info = check(facets, e, V)
                    row.update(info)
                    rows.append(row)
                    ok &= good
    return ok, rows


def criterion_2(precision: int | None = None) -> CriterionResult:
    def check(facets, e, V):
        c = chain_complex(facets, e, V)
        good = c.dd_zero and c.exact and c.h0_matches and c.containment_ok
        return good, {"homology": c.homology, "vertex_sum_rank": c.vertex_sum_rank, "dd_zero": c.dd_zero,
                      "exact": c.exact}
    ok, rows = _grid(precision, check)
    return CriterionResult(2, "resolution exactness", ok, {"rows": rows}, OPERATOR)


def criterion_3(precision: int | None = None) -> CriterionResult:
    def check(facets, e, V):
        r = euler_report(facets, e, V)
        return r.ok, {"idempotent": r.idempotent, "image_rank": r.image_rank,
                      "vertex_sum_rank": r.vertex_sum_rank, "kills_complement": r.kills_complement}
    ok, rows = _grid(precision, check)
    return CriterionResult(3, "Euler idempotents", ok, {"rows": rows}, OPERATOR)


# -- 4 ----------------------------------------------------------------------


def criterion_4(precision: int | None = None) -> CriterionResult:
    facets = building_ball(2, 2, 2)
    rows, ok = [], True
    for r, e in ((1, 0), (2, 0), (2, 1)):
        m = _model_level(max(required_level(facets, e, 2), r + 1), precision)
        V = principal_series(2, 2, None, m)
        c = cancellation_check(r, e, facets, V)
        lv = level_check(V, e, r, facets)
        rows.append({"r": r, "e": e, "m": m, "cancellation": c, "level": lv})
        ok &= c and lv
    return CriterionResult(4, "cancellation", ok, {"rows": rows}, OPERATOR)


# -- 5 ----------------------------------------------------------------------

GAMMA5 = (1, 3)


def criterion_5(precision: int | None = None, budget: int = 256, seed: int = 0) -> CriterionResult:
    p = 2
    gamma = diag(GAMMA5)
    r = int(singular_depth(gamma, 0, p).r_split)
    o = ApartmentPoint.origin(2)
    rng = random.Random(seed)
    ok = True
    details = {"r": r, "models": []}
    for m in ((5, 6) if precision is None else (precision,)):
        V = principal_series(2, p, None, m)
        hs = torus_slice(2, p, r, m, budget, rng)
        per_s = {}
        for s in range(0, 5):
            K = filtration_spec(o, s, p)
            base = chi_K(gamma, K, V)
            vals = {chi_K(mul(gamma, diag(h)), K, V) for h in hs}
            oracle = trivial_fixed_trace(GAMMA5, p, s)
            const = vals == {base}
            match = base == (Fraction(oracle),)
            per_s[s] = {"value": _fmt(base), "oracle": oracle, "constant": const, "matches_oracle": match}
            if s >= r:
                ok &= const and match
        details["models"].append({"m": m, "slice_size": len(hs), "by_s": per_s})
    return CriterionResult(5, "character constancy (split compact)", ok, details, EXACT)


# -- 6 ----------------------------------------------------------------------


def criterion_6(precision: int | None = None, radii: int = 3) -> CriterionResult:
    p, e = 2, 0
    gamma = diag(GAMMA5)
    r = int(singular_depth(gamma, e, p).r_split)
    o = ApartmentPoint.origin(2)
    taus = {}
    for R in range(radii + 1):
        B = building_ball(R, 2, p)
        m = _model_level(max(required_level(B, e, p), r + 2), precision)
        V = principal_series(2, p, None, m)
        taus[R] = tau_sigma(gamma, B, e, V)
    m = _model_level(6, precision)
    V = principal_series(2, p, None, m)
    chis = {s: chi_K(gamma, filtration_spec(o, s, p), V) for s in range(r, min(m - 1, 5))}
    target = chis[r]
    stable = [R for R in taus if all(taus[S] == target for S in taus if S >= R)]
    sigma0 = min(stable) if stable else None
    ok = sigma0 is not None and sigma0 < radii and all(v == target for v in chis.values())
    return CriterionResult(6, "trace formula agreement", ok,
                           {"tau": {R: _fmt(v) for R, v in taus.items()},
                            "chi_Ks": {s: _fmt(v) for s, v in chis.items()},
                            "stable_from_radius": sigma0}, OPERATOR)


# -- 7 ----------------------------------------------------------------------


def criterion_7(precision: int | None = None) -> CriterionResult:
    p = 2
    rows, ok = [], True
    for g in ((1, 3), (3, 5), (1, 9)):
        gamma = diag(g)
        sd = sd_of(gamma, p)
        for R in range(4):
            fs = fixed_vertices(gamma, R, p, m=precision)
            bounds = verify_fixpoint_bounds(gamma, R, p)
            dts = [torus_distance(v) for v in fs.vertices]
            dt_ok = all(d <= 1 * sd for d in dts)
            oracle = tree_fixed_count(g, p, R)
            b_ok = all(b and c for b, c in bounds.values())
            rows.append({"gamma": list(g), "R": R, "fixed": len(fs), "oracle": oracle,
                         "bounds_ok": b_ok, "max_dT": max(dts), "dT_ok": dt_ok})
            ok &= b_ok and dt_ok and oracle == len(fs)
        # h with sd_alpha(h) > hgt * sd(gamma)
        for k in range(sd + 1, sd + 3):
            h = (1, 1 + p ** k)
            hs = hair_stability(gamma, diag(h), 3, p)
            rows.append({"gamma": list(g), "h": list(h), "hair_stable": hs})
            ok &= hs
    return CriterionResult(7, "fixed-point bounds", ok, {"rows": rows}, EXACT)


# -- 8 ----------------------------------------------------------------------


def criterion_8(precision: int | None = None, samples: int = 100, seed: int = 0) -> CriterionResult:
    p = 2
    rows, ok = [], True
    for n, m, g in ((2, 8, (1, 3)), (3, 10, (1, 3, 5))):
        m = _model_level(m, precision)
        gamma = diag(g)
        rng = random.Random(seed)
        comm_ok = conj_ok = 0
        for _ in range(samples):
            lower = rng.random() < 0.5
            v = random_upper_unipotent(n, p, m, rng, lower)
            u = (solve_commutator_lower if lower else solve_commutator)(v, gamma)
            comm_ok += commutator(u, gamma) == v
        o = ApartmentPoint.origin(n)
        sd = sd_of(gamma, p)
        floor = m - 3
        steps = []
        for _ in range(samples):
            u = random_element(filtration_spec(o, sd, p), rng, m)
            y = mul(u, gamma, inv(u))
            r = max(sd, min(spec_level(mul(y, inv(gamma)), o, p), floor))
            w = conjugate_into_torus(y, gamma, o, r, p, m)
            back = mul(w.g, w.t, inv(w.g), inv(y))
            in_slice = r + 1 > floor or torus_spec(n, p, r + 1).contains_rational(mul(w.t, inv(gamma)))
            good = filtration_spec(o, floor, p).contains_rational(back) and in_slice
            conj_ok += good
            steps.append(w.steps)
        rows.append({"n": n, "p": p, "m": m, "gamma": list(g), "commutator_ok": comm_ok,
                     "conjugation_ok": conj_ok, "samples": samples, "max_steps": max(steps)})
        ok &= comm_ok == samples and conj_ok == samples
    return CriterionResult(8, "commutator solver and conjugation", ok, {"rows": rows},
                           sampled(seed, samples))


# -- 9 ----------------------------------------------------------------------


def criterion_9(precision: int | None = None) -> CriterionResult:
    rows, ok = [], True
    Cmax = Fraction(0)
    for p in (2, 3):
        for cname, chi in characters(p).items():
            table = growth_table(2, p, 3, chi)
            prev = None
            for row in table:
                d = row.as_dict()
                d.update({"p": p, "chi": cname})
                Cmax = max(Cmax, row.C_e)
                # below the level of the representation there are no invariants
                if row.e >= chi.depth:
                    if prev is not None:
                        ok &= row.mu_dim < prev
                    prev = row.mu_dim
                if row.orbit_count is not None:
                    R = row.e - chi.depth
                    d["orbit_oracle"] = tree_ball_count(p, R)
                    ok &= row.orbit_count == d["orbit_oracle"]
                if cname == "trivial":
                    o = orbit_count_on_p1(principal_congruence_gens(p, row.e + 1), p, row.e + 1)
                    d["dim_oracle"] = o
                    ok &= o == row.dim_VKe
                rows.append(d)
    ok &= Cmax <= 4
    return CriterionResult(9, "growth bounds", ok, {"C": str(Cmax), "rows": rows}, EXACT)


# -- 10 ---------------------------------------------------------------------


def criterion_10(precision: int | None = None) -> CriterionResult:
    p = 2
    gamma = diag((2, 3))
    m = _model_level(7, precision)
    V = principal_series(2, p, None, m)
    o = ApartmentPoint.origin(2)
    vals = {}
    for s in (2, 3, 4):
        K = filtration_spec(o, s, p)
        V.check_trace_window(gamma, K)
        vals[s] = chi_K(gamma, K, V)
    ok = len(set(vals.values())) == 1
    return CriterionResult(10, "non-compact stabilization", ok,
                           {"m": m, "chi_Ks": {s: _fmt(v) for s, v in vals.items()}}, EXACT)


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


NAMES = {1: "double-coset counts", 2: "resolution exactness", 3: "Euler idempotents",
         4: "cancellation", 5: "character constancy (split compact)", 6: "trace formula agreement",
         7: "fixed-point bounds", 8: "commutator solver and conjugation", 9: "growth bounds",
         10: "non-compact stabilization"}


def run_criterion(i: int, precision: int | None = None) -> CriterionResult:
    t = time.perf_counter()
    try:
        res = CRITERIA[i](precision)
    except BuildingLabError as exc:
        res = CriterionResult(i, NAMES[i], False,
                              {"error": type(exc).__name__, "message": str(exc)})
    res.seconds = round(time.perf_counter() - t, 3)
    return res


def run_all(precision: int | None = None, only=None) -> list[CriterionResult]:
    ids = sorted(only) if only else sorted(CRITERIA)
    return [run_criterion(i, precision) for i in ids]
