"""Command-line surface tying the engines together.

Subcommands: derive, count, real, verify, igusa.  Every run emits a single
machine-readable JSON report to stdout (or --out); logs go to stderr.  Exit
codes: 0 = all checks pass, 1 = a check failed, 2 = usage or input error
(click's own usage errors also exit 2).

With ``count --histogram --out report.json`` the fiber histogram is
additionally rendered as a PNG bar chart and a CSV of per-eps fiber sizes
next to the JSON report.
"""

from __future__ import annotations

import csv
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

import click

from . import __version__, fqcount, ident, realnum, triangulate

log = logging.getLogger("knotlocal")

BUILTIN_KNOTS = ("3_1", "4_1", "5_2", "m237")


def bundled_examples():
    """The four bundled triangulation documents, parsed."""
    out = []
    for name in BUILTIN_KNOTS:
        text = resources.files("knotlocal.data").joinpath(name + ".tri").read_text()
        out.append(triangulate.parse_triangulation(text))
    return out


def load_knot(knot: Optional[str], path: Optional[str]):
    if (knot is None) == (path is None):
        raise click.UsageError("give exactly one of --knot or --input")
    if knot is not None:
        if knot not in BUILTIN_KNOTS:
            raise click.UsageError(
                "unknown knot %r; builtins: %s" % (knot, ", ".join(BUILTIN_KNOTS)))
        text = resources.files("knotlocal.data").joinpath(knot + ".tri").read_text()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise click.UsageError("cannot read %s: %s" % (path, exc))
    try:
        return triangulate.parse_triangulation(text)
    except triangulate.TriangulationError as exc:
        raise click.UsageError("invalid triangulation: %s" % exc)


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)


@dataclass
class Report:
    config: RunConfig
    results: dict = field(default_factory=dict)
    passed: bool = True
    elapsed: float = 0.0
    version: str = __version__

    def to_document(self) -> dict:
        return {
            "tool": "knotlocal",
            "version": self.version,
            "command": self.config.command,
            "options": _plain(self.config.options),
            "passed": self.passed,
            "results": _plain(self.results),
            "elapsed_seconds": round(self.elapsed, 6),
        }


def _plain(obj):
    """Make report payloads JSON-friendly and deterministic."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "__dict__") and not isinstance(obj, type):
        return _plain(vars(obj))
    return obj


def _emit(report: Report, out: Optional[str]) -> None:
    text = json.dumps(report.to_document(), indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
        log.info("report written to %s", out)
    else:
        click.echo(text)


def _finish(report: Report, out: Optional[str], start: float):
    report.elapsed = time.perf_counter() - start
    _emit(report, out)
    if not report.passed:
        sys.exit(1)


def _system_for(tri):
    return triangulate.gluing_system(tri)


@click.group()
@click.version_option(version=__version__)
@click.option("--verbose", is_flag=True, help="debug logging to stderr")
def main(verbose: bool) -> None:
    """Local-field invariants of knot complements from ideal triangulations."""
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.option("--knot", type=str, default=None, help="builtin knot name")
@click.option("--input", "path", type=str, default=None, help="triangulation file")
@click.option("--out", type=str, default=None, help="write the JSON report here")
def derive(knot, path, out):
    """Derive the kinematical matrix, gluing system and exponent data."""
    start = time.perf_counter()
    tri = load_knot(knot, path)
    kin = triangulate.kinematical_data(tri)
    fam = triangulate.balance_angles(tri)
    g = triangulate.gluing_system(tri, fam)
    report = Report(RunConfig("derive", {"knot": knot, "input": path}))
    report.results = {
        "name": tri.name,
        "tetrahedra": tri.num_tetrahedra,
        "Q": kin.Q,
        "sigma": g.sigma,
        "m": g.m,
        "N": g.N,
        "e_slope": g.e_slope,
        "e_offset": g.e_offset,
        "t_coeff": repr(g.t_coeff),
        "free_symbols": list(fam.basis),
    }
    _finish(report, out, start)


@main.command()
@click.option("--knot", type=str, default=None)
@click.option("--input", "path", type=str, default=None)
@click.option("--p", "prime", type=int, required=True)
@click.option("--eps", type=int, default=None, help="single fiber eps")
@click.option("--all-eps", is_flag=True, help="all fibers over F_p^x")
@click.option("--s", "s_val", type=str, default=None)
@click.option("--t", "t_val", type=str, default=None)
@click.option("--brute-force", is_flag=True, help="use the naive oracle scan")
@click.option("--histogram", is_flag=True, help="emit the fiber histogram")
@click.option("--workers", type=int, default=1, help="worker-pool size")
@click.option("--out", type=str, default=None)
def count(knot, path, prime, eps, all_eps, s_val, t_val, brute_force, histogram,
          workers, out):
    """Count fiber points of the gluing system over F_p."""
    start = time.perf_counter()
    tri = load_knot(knot, path)
    g = _system_for(tri)
    if eps is None and not (all_eps or histogram):
        raise click.UsageError("give --eps or --all-eps/--histogram")
    report = Report(RunConfig("count", {
        "knot": knot, "input": path, "p": prime, "eps": eps,
        "all_eps": all_eps, "s": s_val, "t": t_val,
        "brute_force": brute_force, "histogram": histogram, "workers": workers,
    }))
    try:
        if histogram or all_eps:
            cr = fqcount.fiber_histogram(g, prime, workers=workers)
        else:
            if brute_force:
                pts = fqcount.brute_force_points(g, prime, eps)
                good = [q for q in pts if not q.degenerate]
                cr = fqcount.CountReport(
                    p=prime, s=s_val, t=t_val,
                    fibers={eps % prime: len(good)},
                    degenerate=[q for q in pts if q.degenerate],
                    invariant={eps % prime: len(good)},
                )
            else:
                cr = fqcount.invariant_sum(g, prime, eps, s=s_val, t=t_val)
    except (ValueError, fqcount.BudgetError) as exc:
        raise click.UsageError(str(exc))
    report.results = {
        "p": cr.p,
        "fibers": cr.fibers,
        "invariant": cr.invariant,
        "degenerate": [
            {"eps": q.epsilon, "coords": q.coords} for q in cr.degenerate
        ],
        "max_fiber": max(cr.fibers.values(), default=0),
        "total_points": cr.total_points,
    }
    if histogram and out:
        _render_histogram(cr, out)
    _finish(report, out, start)


def _render_histogram(cr, out: str) -> None:
    """PNG bar chart and CSV of per-eps fiber sizes next to the report."""
    stem = out[:-5] if out.endswith(".json") else out
    csv_path = stem + ".csv"
    png_path = stem + ".png"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["eps", "fiber_size", "nondegenerate"])
        for e in sorted(cr.fibers):
            w.writerow([e, cr.fibers[e], cr.invariant.get(e, 0)])
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    eps_vals = sorted(cr.fibers)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(eps_vals, [cr.fibers[e] for e in eps_vals], color="#336699")
    ax.set_xlabel("eps")
    ax.set_ylabel("fiber size")
    ax.set_title("fiber sizes over F_%d^x" % cr.p)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    log.info("histogram artifacts: %s, %s", png_path, csv_path)


@main.command()
@click.option("--knot", type=click.Choice(["4_1", "5_2-hks"]), required=True)
@click.option("--lambda-dot", type=float, default=0.0)
@click.option("--mu-dot", type=float, default=0.0)
@click.option("--tol", type=float, default=1e-10)
@click.option("--max-evals", type=int, default=200000)
@click.option("--out", type=str, default=None)
def real(knot, lambda_dot, mu_dot, tol, max_evals, out):
    """Evaluate the real-field state integrals."""
    start = time.perf_counter()
    report = Report(RunConfig("real", {
        "knot": knot, "lambda_dot": lambda_dot, "mu_dot": mu_dot,
        "tol": tol, "max_evals": max_evals,
    }))
    try:
        if knot == "4_1":
            qr = realnum.mb_41(lambda_dot, mu_dot, tol=tol)
        else:
            qr = realnum.hks_52(tol=tol)
    except (realnum.RealnumError, realnum.DivergenceError) as exc:
        raise click.UsageError(str(exc))
    if qr.evaluations > max_evals:
        log.warning("evaluation budget exceeded: %d > %d", qr.evaluations, max_evals)
        report.passed = False
    report.results = {
        "value": qr.value,
        "abs_error_estimate": qr.abs_error_estimate,
        "evaluations": qr.evaluations,
        "meta": qr.meta,
    }
    _finish(report, out, start)


SUITES = ("pentagon-finite", "inversion", "residue", "angled", "weil", "symm", "real")


@main.command()
@click.option("--suite", type=click.Choice(SUITES), required=True)
@click.option("--p", "prime", type=int, default=5)
@click.option("--samples", type=int, default=1000)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=str, default=None)
def verify(suite, prime, samples, seed, out):
    """Run an identity-verification suite; exit 0 only on a full pass."""
    start = time.perf_counter()
    report = Report(RunConfig("verify", {
        "suite": suite, "p": prime, "samples": samples, "seed": seed,
    }))
    try:
        if suite == "pentagon-finite":
            rep = ident.finite_pentagon_check(prime)
            report.passed = (rep.max_residual <= 1e-9
                             and rep.convention_independent)
            report.results = vars(rep)
        elif suite == "inversion":
            ok = ident.inversion_check(prime)
            report.passed = ok
            report.results = {"p": prime, "holds": ok}
        elif suite == "real":
            report.results = _real_suite(samples, seed)
            report.passed = report.results["passed"]
        else:
            fn = {
                "residue": ident.residue_support_check,
                "angled": ident.angled_pentagon_support_check,
                "weil": ident.weil_symmetry_check,
                "symm": ident.symm23_check,
            }[suite]
            rep = fn(n=samples, seed=seed)
            report.passed = rep.passed
            report.results = vars(rep)
    except ident.IdentError as exc:
        raise click.UsageError(str(exc))
    _finish(report, out, start)


def _real_suite(samples: int, seed: int) -> dict:
    """Max residuals of the real-field identity suites."""
    import random

    rng = random.Random(seed)
    worst_inv = 0.0
    for _ in range(samples):
        z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        if abs(z - round(z.real)) < 1e-3 or abs((1 - z) - round(1 - z.real)) < 1e-3:
            continue
        for n in (0, 1):
            worst_inv = max(worst_inv, abs(
                realnum.gamma_n(n, z) * realnum.gamma_n(n, 1 - z) - 1.0))
    worst_forms = 0.0
    import math
    for _ in range(samples):
        adot = rng.uniform(0.05, 0.9)
        cdot = rng.uniform(0.05, 0.95 - adot)
        tri = realnum.RealAngleTriple.from_ac(
            adot, cdot,
            rng.choice([-1, 1]) * math.exp(rng.uniform(-1, 1)),
            rng.choice([-1, 1]) * math.exp(rng.uniform(-1, 1)))
        x = realnum.SignedLog.from_real(
            rng.choice([-1, 1]) * math.exp(rng.uniform(-2, 2)))
        y = realnum.SignedLog.from_real(
            rng.choice([-1, 1]) * math.exp(rng.uniform(-2, 2)))
        h = realnum.h_ac(x, y, tri)
        worst_forms = max(worst_forms,
                          abs(h.triple_beta - h.gamma_product),
                          abs(h.bc_form - h.gamma_product))
    worst_fourier = 0.0
    for _ in range(20):
        worst_fourier = max(worst_fourier, realnum.fourier_gamma_check(
            rng.uniform(0.2, 3.0), rng.uniform(-0.5, 0.5)))
    passed = worst_inv <= 1e-12 and worst_forms <= 1e-10 and worst_fourier <= 1e-8
    return {
        "gamma_inversion_max": worst_inv,
        "h_ac_forms_max": worst_forms,
        "fourier_gamma_max": worst_fourier,
        "passed": passed,
    }


@main.command()
@click.option("--p", "prime", type=int, required=True)
@click.option("--n", "depth", type=int, default=4)
@click.option("--s", "s_vals", type=int, multiple=True, default=(1, 2, 3))
@click.option("--out", type=str, default=None)
def igusa(prime, depth, s_vals, out):
    """Truncated local zeta integrals vs the closed form, plus mod-p^n counts."""
    start = time.perf_counter()
    report = Report(RunConfig("igusa", {
        "p": prime, "n": depth, "s": list(s_vals),
    }))
    rows = fqcount.igusa_I(prime, list(s_vals), depth)
    examples = {
        "x": fqcount.count_mod_pn({(1,): 1}, prime, min(depth, 3)),
        "x^2": fqcount.count_mod_pn({(2,): 1}, prime, min(depth, 3)),
        "x(x-1)": fqcount.count_mod_pn({(2,): 1, (1,): -1}, prime, min(depth, 3)),
    }
    report.passed = all(r["match"] for r in rows)
    report.results = {"igusa_rows": rows, "count_mod_pn": examples}
    _finish(report, out, start)


if __name__ == "__main__":
    main()
