"""Command line interface.

Exit codes: 0 success or equivalent, 1 not equivalent or unrecognised,
2 input error, 3 resource or budget error.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path
from typing import Optional

import click

from .compiler import Timer, compile_pattern, digest, report
from .diagram import Diagram
from .dot import to_dot
from .errors import InputError, MatchError, ResourceError, BudgetError
from .gates import library_entry, load_library
from .lattice import DEFAULT_SITE_CAP, build_from_spec, check_convention
from .rewrite import DEFAULT_BUDGET, RuleId, apply, match_at, normalize
from .semantics import DEFAULT_RANK_CAP, DEFAULT_TOL, TensorMap, equiv_up_to_scalar, evaluate

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=False)
        fh.write("\n")


def _emit(obj) -> None:
    click.echo(json.dumps(obj, indent=1))


def _read_diagram(path: str) -> Diagram:
    return Diagram.from_json(_read_json(path))


def guarded(fn):
    """Map library errors onto the exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except BudgetError as exc:
            click.echo(f"budget error: {exc}", err=True)
            sys.exit(EXIT_RESOURCE)
        except ResourceError as exc:
            click.echo(f"resource error: {exc}", err=True)
            sys.exit(EXIT_RESOURCE)
        except MatchError as exc:
            click.echo(f"no match: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except InputError as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        sys.exit(code or EXIT_OK)

    return wrapper


def common(fn):
    """Options shared by every subcommand."""
    options = [
        click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True, help="Equivalence tolerance."),
        click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True, help="Rewrite step budget."),
        click.option("--rank-cap", type=int, default=DEFAULT_RANK_CAP, show_default=True, help="Largest tensor size."),
        click.option("--seed", type=int, default=None, help="Seed for randomised measurement outcomes."),
        click.option("--convention", default=None, help="Lattice colouring: red-centre or green-centre."),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(package_name="artifact")
def cli() -> None:
    """Build, rewrite, compile and verify red/green process diagrams."""


@cli.command()
@click.argument("spec", type=click.Path())
@click.argument("out", type=click.Path())
@click.option("--site-cap", type=int, default=DEFAULT_SITE_CAP, show_default=True)
@common
@guarded
def build(spec, out, site_cap, tol, budget, rank_cap, seed, convention):
    """Tile a cluster lattice from SPEC and write its diagram to OUT."""
    obj = _read_json(spec)
    if not isinstance(obj, dict):
        raise InputError("lattice spec must hold a JSON object")
    if convention is not None:
        obj = dict(obj, convention=check_convention(convention))
    b = build_from_spec(obj, cap=site_cap)
    _write_json(out, b.diagram.to_json())
    _emit({"sites": len(b.site_index), "vertices": len(b.diagram), "edges": b.diagram.num_edges(), "out": str(out)})


@cli.command("compile")
@click.argument("pattern", type=click.Path())
@click.option("--out", "out_dir", type=click.Path(), default=None, help="Directory for report and normal form.")
@click.option(
    "--outcomes",
    type=click.Choice(["pattern", "all-plus", "seeded"]),
    default="pattern",
    show_default=True,
    help="Measurement outcomes: as in the pattern file, all +1, or random from --seed.",
)
@click.option("--emit-trace", type=click.Path(), default=None, help="Write the rewrite trace here.")
@click.option("--figures", type=click.Path(), default=None, help="Render figures into this directory.")
@common
@guarded
def compile_cmd(pattern, out_dir, outcomes, emit_trace, figures, tol, budget, rank_cap, seed, convention):
    """Compile a measurement PATTERN and name the logical gate it implements."""
    obj = _read_json(pattern)
    if convention is not None and isinstance(obj, dict) and "lattice" in obj:
        obj = dict(obj, lattice=dict(obj["lattice"], convention=check_convention(convention)))
    override: Optional[object] = None
    if outcomes == "all-plus":
        override = "all-plus"
    elif outcomes == "seeded":
        if seed is None:
            raise InputError("--outcomes seeded needs --seed")
        override = {"seed": seed}
    with Timer() as t:
        try:
            c = compile_pattern(obj, budget=budget, tol=tol, rank_cap=rank_cap, outcomes=override)
        except BudgetError as exc:
            if emit_trace and exc.trace is not None:
                _write_json(emit_trace, exc.trace.to_json())
            raise
    artifacts = {}
    if out_dir is not None:
        out = Path(out_dir)
        _write_json(out / "normal.json", c.normal.to_json())
        _write_json(out / "logical.json", c.logical.to_json())
        artifacts["normal_form"] = str(out / "normal.json")
        artifacts["logical_form"] = str(out / "logical.json")
    if emit_trace:
        _write_json(emit_trace, c.trace.to_json())
        artifacts["trace"] = str(emit_trace)
    if figures:
        from .plotting import draw_diagram, plot_measure_curve

        fig_dir = Path(figures)
        fig_dir.mkdir(parents=True, exist_ok=True)
        paths = [
            draw_diagram(c.normal, fig_dir / "normal_form.png", title="normal form"),
            draw_diagram(c.logical, fig_dir / "logical_form.png", title=f"logical form: {c.recognition.name}"),
            plot_measure_curve(c.trace, c.trace_start, fig_dir / "normalization_curve.png", title="normalisation"),
        ]
        artifacts["figures"] = [str(p) for p in paths]
    rep = report(c, digest(obj), t.elapsed, artifacts)
    if out_dir is not None:
        _write_json(Path(out_dir) / "report.json", rep)
    _emit(rep)
    click.echo(f"recognized: {c.recognition.name}", err=True)
    return EXIT_OK if c.recognition.name != "unrecognized" else EXIT_FAIL


@cli.command()
@click.argument("diagram", type=click.Path())
@click.argument("expected")
@common
@guarded
def verify(diagram, expected, tol, budget, rank_cap, seed, convention):
    """Check DIAGRAM against EXPECTED, a gate name or a tensor JSON file."""
    d = _read_diagram(diagram)
    if Path(expected).is_file():
        target = TensorMap.from_json(_read_json(expected))
        name = expected
    else:
        target = library_entry(expected, load_library()).tensor
        name = expected
    tm = evaluate(d, rank_cap=rank_cap)
    if tm.matrix.shape != target.matrix.shape:
        _emit({"expected": name, "equivalent": False, "scalar": None, "residual": None, "reason": "shape mismatch"})
        return EXIT_FAIL
    eq = equiv_up_to_scalar(tm, target, tol=tol)
    _emit(dict({"expected": name}, **eq.to_json()))
    return EXIT_OK if eq.equivalent else EXIT_FAIL


@cli.command()
@click.argument("diagram", type=click.Path())
@click.option("-o", "--out", type=click.Path(), required=True, help="Where to write the result.")
@click.option("--rule", default=None, help="Rule to apply once, e.g. spider-fuse.")
@click.option("--anchor", type=int, multiple=True, help="Anchor vertex id (repeatable).")
@click.option("--normalize", "do_normalize", is_flag=True, help="Normalise instead of one step.")
@click.option("--policy", type=click.Choice(["shrink", "measure"]), default="shrink", show_default=True)
@click.option("--emit-trace", type=click.Path(), default=None)
@common
@guarded
def rewrite(diagram, out, rule, anchor, do_normalize, policy, emit_trace, tol, budget, rank_cap, seed, convention):
    """Apply one rule at an anchor, or normalise DIAGRAM."""
    d = _read_diagram(diagram)
    if do_normalize == (rule is not None):
        raise InputError("give exactly one of --rule or --normalize")
    if do_normalize:
        try:
            result, trace = normalize(d, policy=policy, budget=budget)
        except BudgetError as exc:
            if emit_trace and exc.trace is not None:
                _write_json(emit_trace, exc.trace.to_json())
            raise
    else:
        try:
            rid = RuleId.parse(rule)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if not anchor:
            raise InputError("--rule needs at least one --anchor")
        m = match_at(d, rid, anchor)
        result = apply(d, m)
        from .rewrite import RewriteStep, Trace

        trace = Trace([RewriteStep(rid, m, before=d, after=result)], [1])
    _write_json(out, result.to_json())
    if emit_trace:
        _write_json(emit_trace, trace.to_json())
    _emit({"steps": len(trace), "before": list(d.measure()), "after": list(result.measure()), "out": str(out)})


@cli.command("export-dot")
@click.argument("diagram", type=click.Path())
@click.argument("out", type=click.Path())
@common
@guarded
def export_dot(diagram, out, tol, budget, rank_cap, seed, convention):
    """Write DIAGRAM as a Graphviz DOT file."""
    d = _read_diagram(diagram)
    Path(out).write_text(to_dot(d))


@cli.command()
@click.argument("diagram", type=click.Path())
@click.option("-o", "--out", type=click.Path(), default=None)
@common
@guarded
def tensor(diagram, out, tol, budget, rank_cap, seed, convention):
    """Contract DIAGRAM and dump its matrix as JSON."""
    tm = evaluate(_read_diagram(diagram), rank_cap=rank_cap)
    if out:
        _write_json(out, tm.to_json())
    else:
        _emit(tm.to_json())


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
