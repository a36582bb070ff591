"""Command-line drivers.  Exit codes: 0 ok, 1 usage, 2 resource guard,
3 domain or precision error, 4 verification failure."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

import click

from . import __version__
from .complexes import building_ball, chain_complex, euler_report, required_level, tau_sigma
from .depth import (diag, fixed_vertices, singular_depth, torus_distance,
                    verify_fixpoint_bounds)
from .errors import (BuildingLabError, DomainError, InsufficientPrecisionError, IrregularElementError,
                     ResourceGuardError)
from .fields import TorusCharacter, depth_one_character, quadratic_character
from .roots import build_root_system
from .rep import principal_series
from .scans import GROWTH_FIELDS, character_scan, growth_table
from .verify import EXACT, OPERATOR, run_all, sampled

ORIENTATION = "entry(i,j)~e_i-e_j; vertex x~diag(p^-x_i)Z_p^n; facets lexicographic; [a,b]=aba^-1b^-1"
EXIT_OK, EXIT_USAGE, EXIT_GUARD, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3, 4


def fingerprint() -> str:
    return hashlib.sha256(ORIENTATION.encode()).hexdigest()[:16]


@dataclass
class RunConfig:
    command: str
    n: int = 2
    p: int = 2
    e: int = 0
    e_max: int = 2
    r: int | None = None
    precision: int | None = None
    radius: int = 2
    chi: str = "trivial"
    gamma: str | None = None
    samples: int = 256
    seed: int = 0
    format: str = "json"
    out: str | None = None


class VerificationFailed(Exception):
    pass


def parse_gamma(text: str, p: int) -> list[Fraction]:
    """Diagonal entries as comma separated tokens p^v*u, p^v, u (u integer or a/b)."""
    out = []
    for tok in text.replace(" ", "").split(","):
        m = re.fullmatch(r"(?:(p|\d+)\^(-?\d+))?\*?(-?\d+(?:/\d+)?)?", tok)
        if not tok or m is None or (m.group(1) is None and m.group(3) is None):
            raise click.BadParameter(f"cannot parse entry {tok!r}", param_hint="--gamma")
        base = p if m.group(1) in (None, "p") else int(m.group(1))
        v = int(m.group(2)) if m.group(2) is not None else 0
        u = Fraction(m.group(3)) if m.group(3) is not None else Fraction(1)
        out.append(Fraction(base) ** v * u)
    return out


def parse_character(name: str, n: int, p: int) -> TorusCharacter:
    if name == "trivial":
        return TorusCharacter.trivial(n, p)
    if name == "depth1":
        return TorusCharacter.first_coordinate(n, p, depth_one_character(p))
    if name == "quadratic":
        return TorusCharacter.first_coordinate(n, p, quadratic_character(p))
    raise click.BadParameter(f"unknown character {name!r}", param_hint="--chi")


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def envelope(cfg: RunConfig, payload, checks: dict, provenance: str, seconds: float) -> dict:
    return {"config": asdict(cfg), "version": __version__, "orientation": fingerprint(),
            "provenance": provenance, "payload": _jsonable(payload), "checks": checks,
            "timing": {"seconds": round(seconds, 3)}}


def emit(cfg: RunConfig, env: dict, rows: list[dict], fields: list[str]) -> None:
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: json.dumps(_jsonable(v)) if isinstance(v, (dict, list, tuple)) else _jsonable(v)
                        for k, v in row.items()})
        text = buf.getvalue()
    else:
        text = json.dumps(env, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def common(f):
    opts = [
        click.option("--n", type=click.IntRange(2, 6), default=2, show_default=True),
        click.option("--p", type=int, default=2, show_default=True),
        click.option("--e", type=click.IntRange(0), default=0, show_default=True),
        click.option("--e-max", "e_max", type=click.IntRange(0), default=2, show_default=True),
        click.option("--r", type=click.IntRange(0), default=None),
        click.option("--precision", type=click.IntRange(1), default=None, help="model level m"),
        click.option("--radius", type=click.IntRange(0), default=2, show_default=True),
        click.option("--chi", default="trivial", show_default=True,
                     type=click.Choice(["trivial", "depth1", "quadratic"])),
        click.option("--gamma", default=None, help="diagonal entries, e.g. '1,3' or 'p^1*1,3'"),
        click.option("--samples", type=click.IntRange(1), default=256, show_default=True),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--format", "format", type=click.Choice(["json", "csv"]), default="json"),
        click.option("--out", type=click.Path(dir_okay=False), default=None),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


def _config(command: str, kw: dict) -> RunConfig:
    cfg = RunConfig(command=command, **kw)
    if cfg.p < 2 or any(cfg.p % d == 0 for d in range(2, int(cfg.p ** 0.5) + 1)):
        raise click.BadParameter("p must be prime", param_hint="--p")
    return cfg


@click.group()
@click.version_option(__version__)
def cli():
    """Exact finite-level experiments on the GL_n building."""


@cli.command()
@common
def roots(**kw):
    """Roots, heights and simple roots of type A_{n-1}."""
    cfg, t = _config("roots", kw), time.perf_counter()
    R = build_root_system(cfg.n)
    rows = [{"root": str(a), "positive": a.positive, "simple": a in R.simple_roots,
             "height": R.height_table.get(a)} for a in R.roots]
    payload = {"rows": rows, "hgt": R.hgt, "rank": R.rank}
    emit(cfg, envelope(cfg, payload, {}, EXACT, time.perf_counter() - t), rows,
         ["root", "positive", "simple", "height"])


def _growth(cfg: RunConfig, with_dims: bool):
    t = time.perf_counter()
    chi = parse_character(cfg.chi, cfg.n, cfg.p)
    table = growth_table(cfg.n, cfg.p, cfg.e_max, chi, with_dims=with_dims)
    rows = [r.as_dict() for r in table]
    checks = {}
    if with_dims:
        checks["within_bound"] = all(r.within_bound for r in table)
    emit(cfg, envelope(cfg, {"rows": rows}, checks, EXACT, time.perf_counter() - t), rows, GROWTH_FIELDS)


@cli.command()
@common
def cosets(**kw):
    """Exact double-coset counts |B \\ G / K_e| for e <= e-max."""
    _growth(_config("cosets", kw), with_dims=False)


@cli.command()
@common
def growth(**kw):
    """Growth table with invariant dimensions and the bound column."""
    _growth(_config("growth", kw), with_dims=True)


@cli.command()
@common
def fixed(**kw):
    """Fixed vertices of a diagonal element in the ball of radius --radius."""
    cfg, t = _config("fixed", kw), time.perf_counter()
    gamma = diag(parse_gamma(cfg.gamma or "1,3", cfg.p))
    fs = fixed_vertices(gamma, cfg.radius, cfg.p, m=cfg.precision)
    bounds = verify_fixpoint_bounds(gamma, cfg.radius, cfg.p)
    rows = []
    for v in fs.vertices:
        row = {"vertex": str(v), "bound_b": bounds[v][0], "bound_c": bounds[v][1]}
        if cfg.n == 2 and len(gamma) == 2:
            row["d_T"] = torus_distance(v)
        rows.append(row)
    checks = {"bounds": all(b and c for b, c in bounds.values())}
    payload = {"radius": cfg.radius, "count": len(fs), "rows": rows,
               "depth": singular_depth(gamma, cfg.e, cfg.p).to_json()}
    emit(cfg, envelope(cfg, payload, checks, EXACT, time.perf_counter() - t), rows,
         ["vertex", "bound_b", "bound_c", "d_T"])


@cli.command()
@common
def charscan(**kw):
    """Character values chi_{K_s}(gamma) and their constancy."""
    cfg, t = _config("charscan", kw), time.perf_counter()
    gamma = parse_gamma(cfg.gamma or "1,3", cfg.p)
    if len(gamma) != cfg.n:
        raise click.BadParameter("gamma must have n entries", param_hint="--gamma")
    dr = singular_depth(gamma, cfg.e, cfg.p)
    if not dr.regular:
        raise IrregularElementError("gamma is irregular")
    chi = parse_character(cfg.chi, cfg.n, cfg.p)
    m = cfg.precision or 6
    rep = principal_series(cfg.n, cfg.p, chi, max(m, chi.conductor_exponent))
    rep_out = character_scan(gamma, cfg.e, rep, range(0, m - 1), cfg.samples, cfg.seed)
    payload = rep_out.to_json()
    rows = [{"s": s, "value": v} for s, v in payload["chi_Ks"].items()]
    checks = {"constant": rep_out.constant}
    prov = sampled(cfg.seed, cfg.samples) if rep_out.compact else EXACT
    emit(cfg, envelope(cfg, payload, checks, prov, time.perf_counter() - t), rows, ["s", "value"])


@cli.command("complex")
@common
def complex_cmd(**kw):
    """Chain complex, Euler idempotent and trace sum on a building ball."""
    cfg, t = _config("complex", kw), time.perf_counter()
    if cfg.n != 2:
        raise DomainError("building balls are enumerated for n = 2")
    chi = parse_character(cfg.chi, cfg.n, cfg.p)
    B = building_ball(cfg.radius, cfg.n, cfg.p)
    m = cfg.precision or max(required_level(B, cfg.e, cfg.p), chi.conductor_exponent, 1)
    rep = principal_series(cfg.n, cfg.p, chi, m)
    c = chain_complex(B, cfg.e, rep)
    u = euler_report(B, cfg.e, rep)
    payload = {"m": m, "complex": c.to_json(), "euler": u.to_json()}
    if cfg.gamma:
        payload["tau"] = [str(x) for x in tau_sigma(diag(parse_gamma(cfg.gamma, cfg.p)), B, cfg.e, rep)]
    checks = {"exact": c.exact, "h0": c.h0_matches, "dd_zero": c.dd_zero, "euler": u.ok}
    rows = [{"degree": d, "dim": c.dims.get(d, 0), "homology": h} for d, h in c.homology.items()]
    emit(cfg, envelope(cfg, payload, checks, OPERATOR, time.perf_counter() - t), rows,
         ["degree", "dim", "homology"])
    if not all(checks.values()):
        raise VerificationFailed("complex checks failed")


@cli.command("verify-all")
@common
@click.option("--only", type=int, multiple=True, help="run only these criteria")
def verify_all(only, **kw):
    """Run the acceptance criteria."""
    cfg, t = _config("verify-all", kw), time.perf_counter()
    results = run_all(cfg.precision, only)
    rows = [{"id": r.id, "name": r.name, "passed": r.passed, "provenance": r.provenance,
             "details": r.details} for r in results]
    checks = {str(r.id): r.passed for r in results}
    emit(cfg, envelope(cfg, {"criteria": rows}, checks, EXACT, time.perf_counter() - t), rows,
         ["id", "name", "passed", "provenance"])
    if not all(r.passed for r in results):
        raise VerificationFailed("some criteria failed")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="building-lab", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return EXIT_USAGE
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except ResourceGuardError as exc:
        click.echo(f"resource guard: {exc}", err=True)
        return EXIT_GUARD
    except (DomainError, InsufficientPrecisionError) as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        return EXIT_DOMAIN
    except VerificationFailed as exc:
        click.echo(f"verification failed: {exc}", err=True)
        return EXIT_VERIFY
    except BuildingLabError as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
