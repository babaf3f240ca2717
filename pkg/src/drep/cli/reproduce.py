"""``drep reproduce``: every acceptance check as one scoreboard."""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import click

from drep.cache import dumps
from drep.cyclic import cyclic_complex
from drep.derham import p3_check, reduced_hdr, stable_derham
from drep.graded import Generator
from drep.homology import betti, euler, les_check
from drep.invariants import (
    TraceData,
    empirical_stability,
    free_closure_dims,
    invariant_dimension,
    invariant_subcomplex,
    obstruction_complex,
    obstruction_inclusion,
    stable_chain_complex,
)
from drep.koszul import (
    ce_complex,
    dual_numbers_algebra,
    square_zero_algebra,
    standard_cochain,
    tau_rn,
    theta_chain_map_check,
    truncated_algebra,
    twisted_tensor,
    universal_cochain,
    verify_twisting_cochain,
)
from drep.models import CheckResult
from drep.presentations.builtins import commuting_plane, dual_numbers, free, sandwich, square_zero
from drep.properties import run_property_suites
from drep.representation import rep_complex, rep_n
from drep.series import (
    chi_rep,
    molien_weyl,
    necklace_counts,
    trains_match_closed,
    verify_identity,
    zeta_closed,
)

logger = logging.getLogger(__name__)

Outcome = tuple[bool, str]


@dataclass(frozen=True)
class Check:
    key: str
    title: str
    run: Callable[[int], Outcome]
    quick: bool = False


def _mismatches(expected: dict, got: dict) -> list[str]:
    return [f"{cell}: expected {v}, got {got.get(cell, 0)}" for cell, v in sorted(expected.items()) if got.get(cell, 0) != v]


def _outcome(problems: list[str], ok_detail: str) -> Outcome:
    return (not problems, "; ".join(problems[:5]) if problems else ok_detail)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def dg_validation(jobs: int) -> Outcome:
    reports = [
        dual_numbers(12).verify_d_squared(12),
        square_zero(1, 8).verify_d_squared(8),
        square_zero(2, 8).verify_d_squared(8),
        commuting_plane().verify_d_squared(8),
        sandwich().verify_d_squared(4),
    ]
    bad = [f"{r.meta['presentation']}: {r.violations[0].detail}" for r in reports if not r.ok]
    return _outcome(bad, f"{sum(r.checked for r in reports)} generators checked")


def dual_numbers_rep_homology(jobs: int) -> Outcome:
    table = betti(rep_complex(dual_numbers(8), 1, 8), jobs=jobs)
    expected = {(1, w): 0 for w in range(1, 9)}
    expected.update({(3, 5): 1, (3, 6): 1, (3, 7): 0, (5, 7): 1, (5, 8): 2})
    return _outcome(_mismatches(expected, table.as_dict()), "H_1 = 0, H_3 and H_5 cells match")


def commuting_plane_rep_homology(jobs: int) -> Outcome:
    table = betti(rep_complex(commuting_plane(6), 1, 6), jobs=jobs)
    # t is odd, so A[t] = A + A t
    expected = {(k, w): (max(0, w - 2 * k + 1) if k <= 1 else 0) for k in range(4) for w in range(7)}
    return _outcome(_mismatches(expected, table.as_dict()), "H(A, 1) = A[t] through weight 6")


def dual_numbers_cyclic(jobs: int) -> Outcome:
    table = betti(cyclic_complex(dual_numbers(9), 9), jobs=jobs)
    problems = []
    for cell in table.cells:
        want = 1 if cell.hdeg % 2 == 0 and cell.weight == cell.hdeg + 1 else 0
        if cell.dim != want:
            problems.append(f"({cell.hdeg}, {cell.weight}): expected {want}, got {cell.dim}")
    missing = [j for j in range(0, 9, 2) if table.dim(j, j + 1) != 1]
    problems += [f"({j}, {j + 1}) missing" for j in missing]
    return _outcome(problems, "HC_{2j} in weight 2j + 1 only")


def stable_homology(jobs: int) -> Outcome:
    problems = []
    for pres in (dual_numbers(8), commuting_plane(8)):
        stable = betti(stable_chain_complex(pres, 8), jobs=jobs).nonzero()
        closure = {c: d for c, d in free_closure_dims(betti(cyclic_complex(pres, 8), jobs=jobs), 8).items() if d}
        problems += [f"{pres.name} {m}" for m in _mismatches(closure, stable) + _mismatches(stable, closure)]
    return _outcome(sorted(set(problems)), "Lambda[HC] matches the stable homology through weight 8")


def stabilization(jobs: int) -> Outcome:
    rows = empirical_stability(dual_numbers(4), 4, 4, jobs=jobs)
    problems = [
        f"weight {row.weight}: onset {row.onset}"
        for row in rows
        if row.onset is None or row.onset > max(row.weight, 1)
    ]
    return _outcome(problems, ", ".join(f"N({row.weight}) = {row.onset}" for row in rows))


def procesi_degree_zero(jobs: int) -> Outcome:
    pres = dual_numbers(5)
    problems = []
    for n in (1, 2, 3):
        data = TraceData(pres, n, 4)
        alg = rep_n(pres, n)
        for w in range(1, 5):
            rank = len(data.cell((0, w)).independent)
            inv = invariant_dimension(alg, 0, w)
            if rank != inv:
                problems.append(f"n={n} w={w}: traces span {rank} of {inv} invariants")
    stable_dim = betti(stable_chain_complex(pres, 5), jobs=jobs).dim(3, 5)
    rep_dim = betti(rep_complex(pres, 1, 5), jobs=jobs).dim(3, 5)
    if (stable_dim, rep_dim) != (0, 1):
        problems.append(f"witness (3, 5): stable {stable_dim}, H_3(A, 1) {rep_dim}")
    return _outcome(problems, "surjective in degree 0; (3, 5) witnesses failure above")


def obstruction(jobs: int) -> Outcome:
    pres = dual_numbers(5)
    data = TraceData(pres, 1, 5)
    report = les_check(
        obstruction_complex(pres, 1, 5, jobs=jobs, data=data),
        stable_chain_complex(pres, 5),
        invariant_subcomplex(pres, 1, 5, jobs=jobs, data=data),
        inclusion=obstruction_inclusion(pres, 1, 5, jobs=jobs, data=data),
        jobs=jobs,
    )
    problems = [f"{v.subject}: {v.detail}" for v in report.violations]
    k = obstruction_complex(sandwich(), 1, 4, jobs=jobs)
    problems += [f"sandwich K_({r},1) has dim {k.dim(1, r)}" for r in range(5) if k.dim(1, r)]
    return _outcome(problems, "K(A, 1) is a subcomplex and Euler additivity holds; sandwich K_(r,1) = 0 for r <= 4")


def identities(jobs: int) -> Outcome:
    reports = [verify_identity("cid1", 30), verify_identity("cid2:2", 30), verify_identity("cid2:3", 30)]
    reports += [trains_match_closed(m, 20) for m in (1, 2, 3)]
    reports.append(verify_identity("cidd1:2", 14))
    necklace_counts(2, 12)
    bad = [f"{r.name} at q^{r.first_mismatch}" for r in reports if not r.verified]
    return _outcome(bad, f"{len(reports)} identities verified")


def molien(jobs: int) -> Outcome:
    pres = dual_numbers(12)
    census = pres.census(12)
    problems = []
    if molien_weyl(census, 1, 12).coefficients() != chi_rep(census, 1, 12).coefficients():
        problems.append("n = 1 differs from chi(R_1)")
    zeta = zeta_closed(census, 8).coefficients()
    for n in (1, 2, 3):
        mw = molien_weyl(census, n, 8).coefficients()
        problems += [f"n={n} q^{s}: {mw[s]} != {zeta[s]}" for s in range(n + 1) if mw[s] != zeta[s]]
    chain_euler = euler(invariant_subcomplex(dual_numbers(4), 2, 4, jobs=jobs))
    mw2 = molien_weyl(dual_numbers(4).census(4), 2, 4).coefficients()
    problems += [f"n=2 q^{w}: {mw2[w]} != chi {chain_euler.get(w, 0)}" for w in range(5) if mw2[w] != chain_euler.get(w, 0)]
    return _outcome(problems, "torus constant terms match chi_rep, zeta and invariant Euler characteristics")


def koszul(jobs: int) -> Outcome:
    alg = dual_numbers_algebra()
    problems = []
    f = universal_cochain(alg, square_zero(1, 10))
    reports = [verify_twisting_cochain(f, 10, 10)]
    reports += [verify_twisting_cochain(tau_rn(alg, r, n, 8), 8, 8) for r in (1, 2) for n in (1, 2)]
    reports += [theta_chain_map_check(a, r, 4, 4) for a in (alg, truncated_algebra(2)) for r in (1, 2)]
    problems += [f"{r.name} {r.meta}: {r.violations[0].subject}" for r in reports if not r.ok]
    for hdeg in (0, 1):
        tau = standard_cochain([Generator(name="v", hdeg=hdeg, weight=1)])
        table = betti(twisted_tensor(tau, 6, 6), jobs=jobs)
        got = {(c.hdeg, c.weight): c.dim for c in table.cells if c.dim and not c.lower_bound}
        if got != {(0, 0): 1}:
            problems.append(f"standard cochain on V of hdeg {hdeg}: homology {got}")
    return _outcome(problems, f"{sum(r.checked for r in reports)} Maurer-Cartan and chain-map checks")


def distinct_odd_partitions(k: int, largest: int) -> int:
    parts = range(1, largest + 1, 2)
    return sum(1 for size in range(len(parts) + 1) for combo in itertools.combinations(parts, size) if sum(combo) == k)


def lqt_invariants(jobs: int) -> Outcome:
    problems = []
    for r in (2, 3):
        dims = ce_complex(square_zero_algebra(1), r, 5, 5).invariant_dims()
        for k in range(6):
            want = distinct_odd_partitions(k, 2 * r - 1)
            if dims.get((k, k), 0) != want:
                problems.append(f"r={r} k={k}: {dims.get((k, k), 0)} != {want}")
    return _outcome(problems, "invariant wedges count partitions into distinct odd parts")


def de_rham(jobs: int) -> Outcome:
    problems = []
    for pres in (free(1), commuting_plane()):
        nonzero = reduced_hdr(pres, 6, jobs=jobs).nonzero()
        if nonzero:
            problems.append(f"reduced HDR of {pres.name}: {nonzero}")
    for n in (1, 2):
        report = p3_check(commuting_plane(), n, 4)
        if not report.ok:
            problems.append(f"P3 n={n}: {report.violations[0].subject}")
    for pres in (dual_numbers(5), commuting_plane()):
        nonzero = stable_derham(pres, 5, jobs=jobs).nonzero()
        if nonzero != {(0, 0): 1}:
            problems.append(f"stable de Rham of {pres.name}: {nonzero}")
    return _outcome(problems, "vanishing holds and Forms(R)_n = DR(R_n)")


def property_suites(jobs: int) -> Outcome:
    reports = run_property_suites(seed=0)
    bad = [f"{r.name}: {r.violations[0].subject}" for r in reports if not r.ok]
    return _outcome(bad, ", ".join(f"{r.name} x{r.checked}" for r in reports))


CHECKS: list[Check] = [
    Check("dg-validation", "d^2 = 0 on every builtin", dg_validation, quick=True),
    Check("rep-dual-numbers", "H(A, 1) for the dual numbers", dual_numbers_rep_homology, quick=True),
    Check("rep-commuting-plane", "H(A, 1) = A[t] for k[x, y]", commuting_plane_rep_homology, quick=True),
    Check("cyclic-dual-numbers", "reduced cyclic homology of k[x]/(x^2)", dual_numbers_cyclic, quick=True),
    Check("stable-homology", "stable homology = Lambda[HC]", stable_homology),
    Check("stabilization", "invariant homology stabilizes by n = w", stabilization),
    Check("procesi", "traces span invariants in degree 0", procesi_degree_zero),
    Check("obstruction", "obstruction complex", obstruction),
    Check("identities", "product identities and necklaces", identities, quick=True),
    Check("molien-weyl", "Molien-Weyl constant terms", molien),
    Check("koszul", "twisting cochains and the trace map", koszul),
    Check("lqt-invariants", "CE invariants of gl_r(k[x]/(x^2))", lqt_invariants, quick=True),
    Check("de-rham", "Karoubi-de Rham vanishing and Forms/DR", de_rham),
    Check("properties", "randomized property suites", property_suites, quick=True),
]

SUITES = {"paper": lambda c: True, "full": lambda c: True, "quick": lambda c: c.quick}


def run_check(check: Check, jobs: int = 1) -> CheckResult:
    started = time.perf_counter()
    try:
        passed, detail = check.run(jobs)
    except Exception as e:
        logger.warning(f"check {check.key} raised {type(e).__name__}: {e}")
        passed, detail = False, f"{type(e).__name__}: {e}"
    result = CheckResult(key=check.key, title=check.title, passed=passed, detail=detail, seconds=round(time.perf_counter() - started, 2))
    logger.debug(f"{check.key}: {'pass' if passed else 'FAIL'} ({result.seconds}s)")
    return result


def run_suite(suite: str = "paper", *, jobs: int = 1, only: tuple[str, ...] = ()) -> list[CheckResult]:
    selected = [c for c in CHECKS if SUITES[suite](c) and (not only or c.key in only)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda c: run_check(c, 1), selected))
    return [run_check(c, 1) for c in selected]


def scoreboard(results: list[CheckResult]) -> str:
    width = max((len(r.key) for r in results), default=0)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.key.ljust(width)}  {r.seconds:>7.2f}s  {r.detail}" for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)


@click.command()
@click.option("--suite", type=click.Choice(sorted(SUITES)), default="paper", show_default=True, help="Which checks to run (full is an alias of paper)")
@click.option("--only", multiple=True, type=click.Choice([c.key for c in CHECKS]), help="Run only these checks (repeatable)")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table", show_default=True, help="Output format")
@click.pass_context
def reproduce(ctx: click.Context, suite: str, only: tuple[str, ...], fmt: str) -> None:
    """Run the acceptance checks and print a scoreboard."""
    jobs = getattr(ctx.obj, "jobs", 1)
    results = run_suite(suite, jobs=jobs, only=only)
    if fmt == "json":
        # timings vary between runs and stay out of the JSON
        click.echo(dumps([r.model_dump(mode="json", exclude={"seconds"}) for r in results]))
    else:
        click.echo(scoreboard(results))
    if not all(r.passed for r in results):
        ctx.exit(1)
