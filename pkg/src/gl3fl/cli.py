"""Command line front end: verification suites and on-demand computations.

Output is either human-readable lines or (with --json) line-delimited JSON
records: one scenario record, one record per check or result, one summary.
Reports are deterministic for a fixed scenario, seed and version; wall-clock
timings are only emitted with --timings.
"""
from __future__ import annotations

import json
import sys
import time
from dataclasses import replace
from importlib import metadata
from typing import List, Optional

import click

from . import breuil as br
from . import combinatorics as cb
from . import padic_ps as pp
from .fontaine_laffaille import FLError, fl_of_matrix
from .scalars import Fq
from .suites import PAPER, SCHEMA_VERSION, SUITES, TRIVIAL, Check, Scenario, run_suite


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _parse_ints(text: str, n: Optional[int] = None, what: str = "value") -> tuple:
    try:
        vals = tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise click.BadParameter(f"{what} must be comma separated integers: {text!r}")
    if n is not None and len(vals) != n:
        raise click.BadParameter(f"{what} needs {n} integers, got {len(vals)}")
    return vals


class Reporter:
    def __init__(self, as_json: bool, out, timings: bool):
        self.as_json = as_json
        self.out = out
        self.timings = timings
        self.t0 = time.perf_counter()

    def emit(self, rec: dict, text: str) -> None:
        line = json.dumps(rec, sort_keys=True, default=str) if self.as_json else text
        self.out.write(line + "\n")

    def header(self, command: str, sc: Scenario, d: int = 1) -> None:
        F = Fq(sc.p, d)
        rec = {"record": "scenario", "command": command, "schema_version": SCHEMA_VERSION,
               "version": _version(), "scenario": sc.to_json(),
               "field": {"p": sc.p, "degree": d, "defining_polynomial": list(F.modulus)}}
        self.emit(rec, f"# {command}  p={sc.p} triple={sc.triple} seed={sc.seed} version={_version()}")

    def check(self, c: Check) -> None:
        tag = "PASS" if c.passed else "FAIL"
        self.emit(c.to_json(), f"{tag} {c.name}  values={c.values}  expected={c.expected} [{c.provenance}]")

    def result(self, name: str, value, provenance: str = TRIVIAL, **extra) -> None:
        rec = {"record": "result", "name": name, "value": value, "provenance": provenance, **extra}
        more = "".join(f" {k}={v}" for k, v in sorted(extra.items()))
        self.emit(rec, f"{name}: {value}{more} [{provenance}]")

    def summary(self, checks: List[Check]) -> None:
        failed = [c.name for c in checks if not c.passed]
        rec = {"record": "summary", "checks": len(checks), "failed": failed,
               "status": "fail" if failed else "pass"}
        if self.timings:
            rec["seconds"] = round(time.perf_counter() - self.t0, 3)
        self.emit(rec, f"# {len(checks) - len(failed)}/{len(checks)} checks passed"
                       + (f" in {rec['seconds']}s" if self.timings else ""))


def scenario_options(fn):
    opts = [
        click.option("--p", "p", type=int, default=11, show_default=True, help="residue characteristic"),
        click.option("--f", "f", type=int, default=1, show_default=True, help="residue degree (1 or 2)"),
        click.option("--triple", default="6,3,0", show_default=True, help="a2,a1,a0 (or a,b,c)"),
        click.option("--case", type=click.Choice(list(br.SHAPES)), default=None, help="Breuil module shape"),
        click.option("--fl", "fl", type=int, default=None, help="unit t (lgc-identity) restricting the sweep"),
        click.option("--seed", type=int, default=1, show_default=True),
        click.option("--precision", type=int, default=12, show_default=True, help="p-adic precision N"),
        click.option("--trials", type=int, default=20, show_default=True),
        click.option("--scenario", "scenario_file", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="JSON file with scenario fields (command line flags are ignored)"),
        click.option("--json", "as_json", is_flag=True, help="line-delimited JSON output"),
        click.option("--out", type=click.File("w"), default="-", help="write the report to a file"),
        click.option("--timings", is_flag=True, help="include wall-clock time in the summary"),
    ]
    for o in reversed(opts):
        fn = o(fn)
    return fn


def build_scenario(p, f, triple, case, fl, seed, precision, trials, scenario_file) -> Scenario:
    if scenario_file:
        with open(scenario_file) as fh:
            data = json.load(fh)
        unknown = set(data) - set(Scenario.__dataclass_fields__)
        if unknown:
            raise click.UsageError(f"unknown scenario fields: {sorted(unknown)}")
        if "triple" in data:
            data["triple"] = tuple(data["triple"])
        sc = Scenario(**data)
    else:
        sc = Scenario(p, f, _parse_ints(triple, 3, "--triple"), case, fl, seed, precision, trials)
    try:
        sc.validate()
    except ValueError as exc:
        raise click.UsageError(str(exc))
    return sc


@click.group()
@click.version_option(_version(), prog_name="gl3fl")
def main():
    """Fontaine-Laffaille invariants, Breuil modules and GL3 principal series checks."""


@main.command()
@click.argument("suite", type=click.Choice(list(SUITES) + ["all"]))
@scenario_options
def verify(suite, as_json, out, timings, scenario_file, **kw):
    """Run a verification suite; exit status 1 if any check fails."""
    sc = build_scenario(scenario_file=scenario_file, **kw)
    rep = Reporter(as_json, out, timings)
    rep.header(f"verify {suite}", sc, 2 if sc.case == br.NIVEAU2 else 1)
    checks = run_suite(suite, sc)
    for c in checks:
        rep.check(c)
    rep.summary(checks)
    if any(not c.passed for c in checks):
        sys.exit(1)


@main.command()
@click.option("--matrix", default=None, help="3x3 Frobenius matrix over F_p, rows separated by ';'")
@click.option("--alphas", default=None, help="a0,a1,a2 constant Frobenius diagonal for --case data")
@click.option("--free", "free", default=None, help="template constants of the residual filtration")
@scenario_options
def fl(matrix, alphas, free, as_json, out, timings, scenario_file, **kw):
    """FL invariant of a Frobenius matrix, or of a diagonal Case A/B/C module."""
    sc = build_scenario(scenario_file=scenario_file, **kw)
    rep = Reporter(as_json, out, timings)
    F = Fq(sc.p)
    if matrix:
        rows = [_parse_ints(r, 3, "--matrix row") for r in matrix.split(";")]
        if len(rows) != 3:
            raise click.UsageError("--matrix needs three rows")
        try:
            x = fl_of_matrix(F, [[v % sc.p for v in r] for r in rows])
        except FLError as exc:
            raise click.UsageError(f"matrix has no FL invariant: {exc}")
        rep.header("fl", sc)
        rep.result("fl", x.to_json(), PAPER)
        return
    shape = sc.case or br.CASE_A
    if shape == br.NIVEAU2:
        raise click.UsageError("use 'verify galois-pipeline --case N2' for niveau 2 modules")
    al = _parse_ints(alphas, 3, "--alphas") if alphas else (1, 2, 3)
    if any(a % sc.p == 0 for a in al):
        raise click.UsageError("--alphas must be units")
    _, unknowns = br.shape_template(shape, sc.triple, sc.p)
    consts = _parse_ints(free, len(unknowns), "--free") if free else (3, 5, 7)[:len(unknowns)]
    consts = [c % sc.p for c in consts]
    if not br.constants_admissible(shape, consts, F):
        raise click.UsageError(f"constants {consts} put the filtration outside Case {shape}")
    M = br.diagonal_case_module(shape, sc.triple, sc.p, [a % sc.p for a in al], consts)
    x = br.breuil_to_fl(M)
    rep.header("fl", sc)
    rep.result("fl", x.to_json(), PAPER, case=shape,
               expected=br.expected_case_fl(shape, [a % sc.p for a in al], F).to_json())


@main.command()
@scenario_options
def types(as_json, out, timings, scenario_file, **kw):
    """Inertial types allowed for the triple (niveau 1 and 2), with forced FL classes."""
    sc = build_scenario(scenario_file=scenario_file, **kw)
    rep = Reporter(as_json, out, timings)
    rep.header("types", sc)
    a2, a1, a0 = sc.triple
    for t in sorted(cb.niveau1_allowed(a2, a1, a0, sc.p), key=lambda t: t.exps):
        rep.result("niveau1", list(t.exps), PAPER)
    for t in sorted(cb.niveau2_allowed(a2, a1, a0, sc.p), key=lambda t: (t.x, t.y)):
        rep.result("niveau2", [t.x, t.y], PAPER, forced_fl=cb.fl_forcing(a2, a1, a0, sc.p, t))


@main.command()
@click.option("--class", "fl_class", type=click.Choice([cb.GENERIC, cb.ZERO, cb.INFINITY]), default=cb.GENERIC,
              show_default=True, help="FL class of the representation")
@scenario_options
def weights(fl_class, as_json, out, timings, scenario_file, **kw):
    """Serre weight lower and upper bounds for (a, b, c) and an FL class."""
    sc = build_scenario(scenario_file=scenario_file, **kw)
    rep = Reporter(as_json, out, timings)
    rep.header("weights", sc)
    a, b, c = sc.triple
    lower, upper = cb.serre_weight_bounds(a, b, c, sc.p, fl_class)
    rep.result("lower", sorted(list(w) for w in lower), PAPER, fl_class=fl_class)
    rep.result("upper", sorted(list(w) for w in upper), PAPER, fl_class=fl_class)


@main.command()
@click.option("--chi", default=None, help="chi1(p),chi2(p),chi0(p) as integers (default p,1+p,1)")
@scenario_options
def kappa(chi, as_json, out, timings, scenario_file, **kw):
    """The constant kappa with S'(Pi v) = p chi1(p) kappa S(v)."""
    sc = build_scenario(scenario_file=scenario_file, **kw)
    rep = Reporter(as_json, out, timings)
    rep.header("kappa", sc)
    vals = _parse_ints(chi, 3, "--chi") if chi else (None, None, None)
    if any(v is not None and v == 0 for v in vals):
        raise click.UsageError("--chi values must be nonzero")
    ch = pp.default_chi(*sc.triple, sc.p, *vals)
    K = pp.compute_kappa(sc.triple, ch, sc.precision)
    rep.result("kappa_residue", K.residue, PAPER, expected=K.expected_residue,
               valuation=K.kappa.val, proportional=K.proportional)
    if not K.ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
