"""CLI commands: validation, homology, series, Koszul duality and de Rham checks."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Optional

import click

from drep import __version__
from drep.cache import ResultCache, dumps
from drep.config import get_settings
from drep.cyclic import cyclic_complex
from drep.derham import p3_check, reduced_hdr, stable_derham
from drep.errors import (
    DrepError,
    IncompletePresentationError,
    MissingDifferentialError,
    PresentationError,
    PresentationSyntaxError,
    TwistingCochainError,
)
from drep.graded import Generator
from drep.homology import betti
from drep.invariants import empirical_stability, invariant_subcomplex, obstruction_complex, stable_chain_complex
from drep.koszul import (
    ce_complex,
    factorization_check,
    finite_algebra,
    standard_cochain,
    tau_rn,
    theta_chain_map_check,
    twisted_tensor,
    universal_cochain,
    verify_twisting_cochain,
)
from drep.koszul.twisting import square_zero_resolution
from drep.models import BettiTable, RunManifest, SeriesReport, StabilityRow, ValidationReport
from drep.presentations import CommDGA, DGAPresentation, load_presentation
from drep.representation import rep_complex, rep_n
from drep.series import (
    chi_rep,
    good_cyclic_counts_by_length,
    molien_weyl,
    necklace_counts,
    series_report,
    trains_match_closed,
    verify_identity,
    zeta_closed,
)

logger = logging.getLogger(__name__)


@dataclass
class RunContext:
    jobs: int
    cache: ResultCache


# input errors exit 2
USAGE_ERRORS = (
    PresentationSyntaxError,
    PresentationError,
    IncompletePresentationError,
    MissingDifferentialError,
    TwistingCochainError,
)


class DrepGroup(click.Group):
    """Turns library errors into ``Error: ...`` on stderr: exit 2 for bad input, 1 otherwise."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except USAGE_ERRORS as e:
            raise click.UsageError(str(e), ctx) from e
        except DrepError as e:
            raise click.ClickException(str(e)) from e


pass_run = click.make_pass_decorator(RunContext)

format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "table"]), default="table", show_default=True, help="Output format"
)
max_weight_option = click.option(
    "--max-weight", "-W", type=click.IntRange(min=0), default=None, help="Weight truncation (default from DREP_DEFAULT_MAX_WEIGHT)"
)


@click.group(cls=DrepGroup)
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging")
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None, help="Result cache directory (overrides DREP_CACHE)")
@click.option("--no-cache", is_flag=True, help="Always recompute")
@click.option("--jobs", "-j", type=click.IntRange(min=1), default=None, help="Worker threads for per-cell work")
@click.version_option(__version__, prog_name="drep")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, cache_dir: Optional[str], no_cache: bool, jobs: Optional[int]) -> None:
    """drep: exact representation homology of weight-graded algebras."""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s")
    settings = get_settings()
    ctx.obj = RunContext(
        jobs=jobs or settings.drep_jobs,
        cache=ResultCache.from_settings(cache_dir, disabled=no_cache),
    )


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _weight(max_weight: Optional[int]) -> int:
    return get_settings().drep_default_max_weight if max_weight is None else max_weight


def _emit(fmt: str, payload: Any, table: str) -> None:
    if fmt == "json":
        click.echo(dumps(payload))
    else:
        click.echo(table)


def _cached(run: RunContext, command: str, digest: str, params: dict, compute: Callable[[], Any]) -> Any:
    manifest = RunManifest(command=command, digest=digest, params=params, version=__version__)
    return run.cache.fetch(manifest, compute)


def _emit_betti(run: RunContext, fmt: str, command: str, digest: str, params: dict, compute: Callable[[], BettiTable]) -> None:
    payload = _cached(run, command, digest, params, lambda: compute().model_dump(mode="json"))
    _emit(fmt, payload, BettiTable.model_validate(payload).to_grid())


def _report_text(report: ValidationReport) -> str:
    status = "ok" if report.ok else "FAILED"
    lines = [f"{report.name}: {status} ({report.checked} checked, {len(report.violations)} violations)"]
    lines += [f"  {v.subject}: {v.detail}" for v in report.violations[:20]]
    if len(report.violations) > 20:
        lines.append(f"  ... {len(report.violations) - 20} more")
    return "\n".join(lines)


def _emit_reports(ctx: click.Context, fmt: str, reports: list[ValidationReport]) -> None:
    payload = [r.model_dump(mode="json") for r in reports]
    _emit(fmt, payload if len(payload) > 1 else payload[0], "\n".join(_report_text(r) for r in reports))
    if not all(r.ok for r in reports):
        ctx.exit(1)


def _series_text(report: SeriesReport) -> str:
    verdict = {None: "", True: "  [verified]", False: f"  [MISMATCH at q^{report.first_mismatch}]"}[report.verified]
    return f"{report.name}: {', '.join(report.coefficients)}{verdict}"


# ---------------------------------------------------------------------------
# presentations and homology
# ---------------------------------------------------------------------------


@cli.command()
@click.argument("source")
@max_weight_option
@format_option
@click.pass_context
def check(ctx: click.Context, source: str, max_weight: Optional[int], fmt: str) -> None:
    """Validate a presentation: degrees, weights and d^2 = 0."""
    w = _weight(max_weight)
    pres = load_presentation(source, w)
    if isinstance(pres, (DGAPresentation, CommDGA)):
        report = pres.verify_d_squared(w)
    else:
        report = ValidationReport(name="census", meta={"presentation": pres.name})
    report.meta["census"] = {str(k): v for k, v in sorted(pres.census(w).counts.items())}
    _emit_reports(ctx, fmt, [report])


@cli.command()
@click.argument("source")
@click.option("-n", "n", type=click.IntRange(min=1), required=True, help="Matrix size")
@max_weight_option
def rep(source: str, n: int, max_weight: Optional[int]) -> None:
    """Print R_n in the presentation file format."""
    pres = load_presentation(source, _weight(max_weight))
    click.echo(rep_n(pres, n).canonical_text(), nl=False)


@cli.command()
@click.argument("source")
@click.option("-n", "n", type=click.IntRange(min=1), required=True, help="Matrix size")
@max_weight_option
@click.option("--invariants", is_flag=True, help="Restrict to GL_n-invariants (trace subcomplex)")
@format_option
@pass_run
def homology(run: RunContext, source: str, n: int, max_weight: Optional[int], invariants: bool, fmt: str) -> None:
    """Betti table of R_n, or of its GL_n-invariant part."""
    w = _weight(max_weight)
    pres = load_presentation(source, w)
    if invariants:
        compute = lambda: betti(invariant_subcomplex(pres, n, w, jobs=run.jobs), jobs=run.jobs)  # noqa: E731
    else:
        compute = lambda: betti(rep_complex(pres, n, w), jobs=run.jobs)  # noqa: E731
    _emit_betti(run, fmt, "homology", pres.digest(), {"n": n, "max_weight": w, "invariants": invariants}, compute)


@cli.command()
@click.argument("source")
@max_weight_option
@format_option
@pass_run
def cyclic(run: RunContext, source: str, max_weight: Optional[int], fmt: str) -> None:
    """Betti table of the reduced cyclic complex C(R)."""
    w = _weight(max_weight)
    pres = load_presentation(source, w)
    _emit_betti(run, fmt, "cyclic", pres.digest(), {"max_weight": w}, lambda: betti(cyclic_complex(pres, w), jobs=run.jobs))


@cli.command()
@click.argument("source")
@max_weight_option
@format_option
@pass_run
def stable(run: RunContext, source: str, max_weight: Optional[int], fmt: str) -> None:
    """Betti table of the stable complex Lambda[C(R)]."""
    w = _weight(max_weight)
    pres = load_presentation(source, w)
    _emit_betti(
        run, fmt, "stable", pres.digest(), {"max_weight": w},
        lambda: betti(stable_chain_complex(pres, w), jobs=run.jobs),
    )


@cli.command()
@click.argument("source")
@click.option("-n", "n", type=click.IntRange(min=1), required=True, help="Matrix size")
@max_weight_option
@format_option
@pass_run
def obstruction(run: RunContext, source: str, n: int, max_weight: Optional[int], fmt: str) -> None:
    """Betti table of the obstruction complex K(A, n)."""
    w = _weight(max_weight)
    pres = load_presentation(source, w)
    _emit_betti(
        run, fmt, "obstruction", pres.digest(), {"n": n, "max_weight": w},
        lambda: betti(obstruction_complex(pres, n, w, jobs=run.jobs), jobs=run.jobs),
    )


@cli.command()
@click.argument("source")
@max_weight_option
@click.option("--max-n", type=click.IntRange(min=1), default=3, show_default=True, help="Largest matrix size scanned")
@format_option
@pass_run
def stabilize(run: RunContext, source: str, max_weight: Optional[int], max_n: int, fmt: str) -> None:
    """Least n from which invariant homology is stable, per weight."""
    w = _weight(max_weight)
    pres = load_presentation(source, w)
    payload = _cached(
        run, "stabilize", pres.digest(), {"max_weight": w, "max_n": max_n},
        lambda: [row.model_dump(mode="json") for row in empirical_stability(pres, w, max_n, jobs=run.jobs)],
    )
    rows = [StabilityRow.model_validate(r) for r in payload]
    lines = [
        f"w={row.weight}: onset {row.onset if row.onset is not None else 'not reached'}  stable {row.stable_dims}"
        for row in rows
    ]
    _emit(fmt, payload, "\n".join(lines))


# ---------------------------------------------------------------------------
# generating functions
# ---------------------------------------------------------------------------


def _emit_series(ctx: click.Context, fmt: str, reports: list[SeriesReport]) -> None:
    payload = [r.model_dump(mode="json") for r in reports]
    _emit(fmt, payload if len(payload) > 1 else payload[0], "\n".join(_series_text(r) for r in reports))
    if any(r.verified is False for r in reports):
        ctx.exit(1)


def _truncation_order(pres_name: str) -> int:
    """m for k[x]/(x^{m+1}), read off the builtin name."""
    if pres_name == "dual-numbers":
        return 1
    name, _, param = pres_name.partition(":")
    if name == "truncated" and param.isdigit():
        return int(param)
    raise click.UsageError(f"--trains needs builtin:dual-numbers or builtin:truncated:m, got {pres_name}")


@cli.command()
@click.argument("source")
@click.option("--terms", "-T", type=click.IntRange(min=0), default=12, show_default=True, help="Expand to q^T")
@click.option("--trains", is_flag=True, help="Check zeta against the m-train enumeration (truncated polynomial algebras)")
@click.option("-n", "n", type=click.IntRange(min=1), default=None, help="Also print chi(R_n)")
@format_option
@click.pass_context
def zeta(ctx: click.Context, source: str, terms: int, trains: bool, n: Optional[int], fmt: str) -> None:
    """zeta(A) = Euler series of Lambda[C(R)] from the generator census, and optionally chi(R_n)."""
    pres = load_presentation(source, terms)
    census = pres.census(terms)
    if trains:
        report = trains_match_closed(_truncation_order(pres.name), terms)
        report.name = "zeta"
        report.meta["presentation"] = pres.name
    else:
        report = series_report("zeta", zeta_closed(census, terms), {"presentation": pres.name})
    reports = [report]
    if n is not None:
        reports.append(series_report(f"chi_{n}", chi_rep(census, n, terms), {"presentation": pres.name, "n": n}))
    _emit_series(ctx, fmt, reports)


@cli.command()
@click.argument("source")
@click.option("-n", "n", type=click.IntRange(min=1), required=True, help="Matrix size")
@click.option("--terms", "-T", type=click.IntRange(min=0), default=8, show_default=True, help="Expand to q^T")
@format_option
@pass_run
def molien(run: RunContext, source: str, n: int, terms: int, fmt: str) -> None:
    """Euler series of the GL_n-invariants by the Molien-Weyl constant term."""
    pres = load_presentation(source, terms)
    census = pres.census(terms)

    def compute() -> dict:
        report = series_report(f"molien_{n}", molien_weyl(census, n, terms), {"presentation": pres.name, "n": n})
        if n == 1:
            report.verified = report.coefficients == [str(c) for c in chi_rep(census, 1, terms).coefficients()]
        return report.model_dump(mode="json")

    payload = _cached(run, "molien", pres.digest(), {"n": n, "terms": terms}, compute)
    _emit_series(click.get_current_context(), fmt, [SeriesReport.model_validate(payload)])


IDENTITY_FORMS = "cid1, cid2:m, cidd:d, cidd1:d or trains:m"


def _check_which(ctx: click.Context, param: click.Parameter, value: tuple[str, ...]) -> tuple[str, ...]:
    for which in value:
        name, _, arg = which.partition(":")
        if which == "cid1" or (name in ("cid2", "cidd", "cidd1", "trains") and arg.isdigit() and int(arg) >= 1):
            continue
        raise click.BadParameter(f"{which!r} is not one of {IDENTITY_FORMS}", ctx=ctx, param=param)
    return value


@cli.command()
@click.option(
    "--which", "-w", multiple=True, default=("cid1",), show_default=True, callback=_check_which,
    help=f"{IDENTITY_FORMS} (repeatable)",
)
@click.option("--terms", "-T", type=click.IntRange(min=1), default=30, show_default=True, help="Compare through q^T")
@format_option
@click.pass_context
def identities(ctx: click.Context, which: tuple[str, ...], terms: int, fmt: str) -> None:
    """Verify product identities between Euler series coefficient by coefficient."""
    reports: list[SeriesReport] = []
    for name in which:
        if name.startswith("trains:"):
            reports.append(trains_match_closed(int(name.partition(":")[2]), terms))
        else:
            reports.append(verify_identity(name, terms))
    _emit_series(ctx, fmt, reports)


@cli.command()
@click.option("--alphabet", "-d", "d", type=click.IntRange(min=1), default=2, show_default=True, help="Alphabet size")
@click.option("--max-len", "--max-r", "max_r", type=click.IntRange(min=1), default=12, show_default=True, help="Largest word length")
@click.option("--good-words/--no-good-words", default=True, help="Also enumerate good cyclic words in odd letters")
@format_option
def necklace(d: int, max_r: int, good_words: bool, fmt: str) -> None:
    """Necklace counts Phi_r(d), M_r(d) and good cyclic word counts c_r."""
    counts = necklace_counts(d, max_r)
    good = good_cyclic_counts_by_length(d, max_r) if good_words else {}
    rows = [
        {"r": r, "phi": phi, "m": m, **({"c": good[r]} if good_words else {})}
        for r, (phi, m) in sorted(counts.items())
    ]
    lines = [" ".join(f"{k}={v}" for k, v in row.items()) for row in rows]
    _emit(fmt, {"d": d, "rows": rows}, "\n".join(lines))


# ---------------------------------------------------------------------------
# Koszul duality
# ---------------------------------------------------------------------------

ALGEBRA_HELP = "dual-numbers, square-zero:d or truncated:m"


@cli.command()
@click.option("--algebra", "-a", default="dual-numbers", show_default=True, help=ALGEBRA_HELP)
@click.option("-r", "r", type=click.IntRange(min=1), default=2, show_default=True, help="Matrix size of gl_r")
@click.option("--max-wedge", "--max-k", "max_k", type=click.IntRange(min=0), default=4, show_default=True, help="Largest wedge degree")
@max_weight_option
@click.option("--theta", is_flag=True, help="Also check that the trace map to the cyclic complex is a chain map")
@format_option
@click.pass_context
def ce(ctx: click.Context, algebra: str, r: int, max_k: int, max_weight: Optional[int], theta: bool, fmt: str) -> None:
    """Relative Chevalley-Eilenberg complex of gl_r(A-bar): invariant dims and homology."""
    w = _weight(max_weight)
    alg = finite_algebra(algebra)
    run: RunContext = ctx.obj
    complex_ = ce_complex(alg, r, max_k, w)
    table = betti(complex_.complex, jobs=run.jobs)
    dims = complex_.invariant_dims()
    payload: dict[str, Any] = {
        "algebra": alg.name,
        "r": r,
        "invariant_dims": [{"k": k, "weight": wt, "dim": d} for (k, wt), d in sorted(dims.items())],
        "homology": table.model_dump(mode="json"),
    }
    lines = [f"invariant wedges of gl_{r}({alg.name}):"]
    lines += [f"  k={k} w={wt}: {d}" for (k, wt), d in sorted(dims.items())]
    lines += ["homology:", table.to_grid()]
    report = None
    if theta:
        report = theta_chain_map_check(alg, r, max_k, w)
        payload["theta"] = report.model_dump(mode="json")
        lines.append(_report_text(report))
    _emit(fmt, payload, "\n".join(lines))
    if report is not None and not report.ok:
        ctx.exit(1)


@cli.command()
@click.option("--example", "--algebra", "algebra", default="dual-numbers", show_default=True, help=ALGEBRA_HELP)
@click.option(
    "--cochain", type=click.Choice(["universal", "tau", "standard"]), default=None,
    help="f: B(A) -> R, tau_{r,n}: CE(gl_r(A)) -> R_n, or the standard Sym^c(V[1]) -> Sym(V) "
    "[default: tau when -r or -n is given, else universal]",
)
@click.option("-r", "r", type=click.IntRange(min=1), default=None, help="gl_r for tau_{r,n} [default: 1]")
@click.option("-n", "n", type=click.IntRange(min=1), default=None, help="R_n for tau_{r,n} [default: 1]")
@click.option("--parity", type=click.Choice(["even", "odd"]), default="even", show_default=True, help="V for --cochain standard")
@click.option("--max-degree", type=click.IntRange(min=0), default=6, show_default=True, help="Largest coalgebra degree")
@max_weight_option
@click.option(
    "--tensor/--no-tensor", default=None,
    help="Homology of the twisted tensor product [default: on for commutative targets]",
)
@click.option("--factorization", is_flag=True, help="Check tau_{r,n} through Sym^c(theta) (tau only)")
@format_option
@click.pass_context
def twist(
    ctx: click.Context,
    algebra: str,
    cochain: Optional[str],
    r: Optional[int],
    n: Optional[int],
    parity: str,
    max_degree: int,
    max_weight: Optional[int],
    tensor: Optional[bool],
    factorization: bool,
    fmt: str,
) -> None:
    """Maurer-Cartan check of a twisting cochain and the homology of its twisted tensor product."""
    w = _weight(max_weight)
    run: RunContext = ctx.obj
    if cochain is None:
        cochain = "tau" if r is not None or n is not None else "universal"
    r, n = r or 1, n or 1
    if tensor and cochain == "universal":
        raise click.UsageError("--tensor needs a commutative target (--cochain tau or standard)")
    if cochain == "standard":
        tau = standard_cochain([Generator(name="v", hdeg=0 if parity == "even" else 1, weight=1)])
    else:
        alg = finite_algebra(algebra)
        if cochain == "universal":
            tau = universal_cochain(alg, square_zero_resolution(alg, max(1, min(w, max_degree))))
        else:
            tau = tau_rn(alg, r, n, w)
    reports = [verify_twisting_cochain(tau, max_degree, w)]
    if factorization and cochain == "tau":
        reports.append(factorization_check(finite_algebra(algebra), r, n, w))
    payload: dict[str, Any] = {"cochain": tau.name, "reports": [rep.model_dump(mode="json") for rep in reports]}
    lines = [_report_text(rep) for rep in reports]
    if tensor is None:
        tensor = cochain != "universal"
    if tensor:
        table = betti(twisted_tensor(tau, max_degree, w), jobs=run.jobs)
        payload["tensor"] = table.model_dump(mode="json")
        lines += [f"{tau.coalgebra.name} x_tau {tau.target.name}:", table.to_grid()]
    _emit(fmt, payload, "\n".join(lines))
    if not all(rep.ok for rep in reports):
        ctx.exit(1)


# ---------------------------------------------------------------------------
# de Rham
# ---------------------------------------------------------------------------


@cli.command()
@click.argument("source")
@max_weight_option
@click.option("--commutative", is_flag=True, help="Compare Forms(R)_n with DR(R_n) instead")
@click.option("-n", "n", type=click.IntRange(min=1), default=1, show_default=True, help="Matrix size for --commutative")
@click.option("--stable", "stable_", is_flag=True, help="Homology of Lambda[C(Forms(R))]")
@format_option
@pass_run
def derham(run: RunContext, source: str, max_weight: Optional[int], commutative: bool, n: int, stable_: bool, fmt: str) -> None:
    """Reduced Karoubi-de Rham homology, its stable version, or the Forms/DR comparison."""
    w = _weight(max_weight)
    pres = load_presentation(source, w)
    if commutative:
        _emit_reports(click.get_current_context(), fmt, [p3_check(pres, n, w)])
        return
    if stable_:
        compute = lambda: stable_derham(pres, w, jobs=run.jobs)  # noqa: E731
    else:
        compute = lambda: reduced_hdr(pres, w, jobs=run.jobs)  # noqa: E731
    _emit_betti(run, fmt, "derham", pres.digest(), {"max_weight": w, "stable": stable_}, compute)


from drep.cli.reproduce import reproduce  # noqa: E402

cli.add_command(reproduce)


if __name__ == "__main__":
    cli()
