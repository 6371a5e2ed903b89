"""End-to-end validation scenarios and the full cross-validation grid.

``run_scenario`` drives either model end to end (simulate, compare against
the analytic law, assemble a ValidationReport); ``run_acceptance`` executes
the whole battery of cross-checks relating the closed forms, the forward
equations, the quadrature oracle, and Monte Carlo, and reports one verdict
per check.  Both are exposed through the command line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .birth import (
    ProcessParams,
    empirical_distribution,
    process_moments,
    simulate_many,
    solve_forward_odes,
)
from .distribution import (
    HarrisParams,
    decap_geometric_pmf,
    harris_pgf,
    harris_pmf,
    nb_pmf,
)
from .mixture import MixtureParams, mixture_moments, mixture_pmf, mixture_pmf_quadrature, sample_model2
from .reporting import SCHEMA_VERSION, render_csv, render_json
from .sampling import GENERATOR_ALGORITHM, RngStream, sample_harris
from .validation import Scenario, ValidationReport, chi_square_gof, make_report

__all__ = [
    "ScenarioRun",
    "CriterionResult",
    "run_scenario",
    "simulate_metadata",
    "simulate_text",
    "run_acceptance",
]

# Default scales: they reproduce the full cross-validation battery.
DEFAULT_BIRTH_REPLICAS = 100_000
DEFAULT_MIXTURE_DRAWS = 1_000_000
DEFAULT_CALIBRATION_SEEDS = 200
DEFAULT_CALIBRATION_DRAWS = 10_000

ODE_GRID = tuple(
    (lam, k, t) for lam in (0.25, 0.5, 1.0) for k in (1, 2, 3) for t in (0.5, 1.0)
)
QUAD_GRID = tuple(
    (a, t, k) for a in (0.5, 1.0, 2.0) for t in (0.5, 1.0, 2.0) for k in (1, 2, 3)
)
IDENTITY_GRID_M = (1.1, 2.0, math.e, 10.0)
IDENTITY_GRID_K = (1, 2, 3, 5)


@dataclass(frozen=True)
class ScenarioRun:
    """One simulated scenario with its verdict and empirical table."""

    report: ValidationReport
    observed: dict
    expected_counts: dict
    coupling_violations: int


def _empirical_tables(observed, marginal, total):
    expected = {}
    max_state = max(observed)
    for n, x in enumerate(range(1, max_state + 1, marginal.k)):
        expected[x] = total * harris_pmf(marginal, n)
    return expected


def run_scenario(model: str, *, k: int, t: float, replicas: int, seed: int,
                 lam: float = None, a: float = None, alpha: float = 0.01,
                 horizon: float = None, threads: int = 1,
                 var_rel_tol: float = 0.05) -> ScenarioRun:
    """Simulate one model and validate it against its analytic law.

    Model "birth" requires lam and simulates replica trajectories (replica
    r on stream r); model "mixture" requires a and draws replicas samples
    from stream 0.
    """
    if replicas < 1:
        raise ValueError(f"need at least one replica, got {replicas!r}")
    if model == "birth":
        if lam is None:
            raise ValueError("model 'birth' needs the rate lam")
        params = ProcessParams(lam, k)
        horizon = t if horizon is None else float(horizon)
        if horizon < t:
            raise ValueError(f"horizon {horizon!r} shorter than query time {t!r}")
        trajectories = simulate_many(params, horizon, replicas, seed,
                                     threads=threads)
        states = np.array([traj.state_at(t) for traj in trajectories])
        violations = sum(traj.coupling_violations() for traj in trajectories)
        observed = empirical_distribution(trajectories, t)
        marginal = params.harris_at(t)
        analytic_mean, analytic_var = process_moments(params, t)
        scenario = Scenario("birth", {"lambda": params.lam, "k": params.k},
                            t, replicas, seed)
    elif model == "mixture":
        if a is None:
            raise ValueError("model 'mixture' needs the mixing rate a")
        params = MixtureParams(a, k)
        draws = sample_model2(RngStream(seed), params, t, size=replicas)
        states = np.asarray(draws)
        violations = int(np.count_nonzero((states - 1) % params.k))
        values, counts = np.unique(states, return_counts=True)
        observed = {int(v): int(c) for v, c in zip(values, counts)}
        marginal = params.harris_at(t)
        analytic_mean, analytic_var = mixture_moments(params, t)
        scenario = Scenario("mixture", {"a": params.a, "k": params.k},
                            t, replicas, seed)
    else:
        raise ValueError(f"unknown model {model!r}")

    report = make_report(
        scenario,
        observed,
        lambda x: harris_pmf(marginal, (x - 1) // marginal.k),
        marginal.support_values(),
        float(states.mean()),
        float(states.var(ddof=1)),
        analytic_mean,
        analytic_var,
        alpha=alpha,
        var_rel_tol=var_rel_tol,
    )
    expected = _empirical_tables(observed, marginal, replicas)
    return ScenarioRun(report, observed, expected, violations)


def simulate_metadata(run: ScenarioRun, alpha: float, horizon: float = None) -> dict:
    """Flag echo plus verdicts; identical runs produce identical metadata."""
    scenario = run.report.scenario
    meta = {"command": "simulate", "schema_version": SCHEMA_VERSION,
            "model": scenario.model}
    meta.update(scenario.params)
    meta["t"] = scenario.t
    if scenario.model == "birth":
        meta["horizon"] = scenario.t if horizon is None else horizon
    meta.update({
        "replicas": scenario.replicas,
        "seed": scenario.seed,
        "alpha": alpha,
        "rng": GENERATOR_ALGORITHM,
        "gof_statistic": run.report.gof.statistic,
        "gof_degrees_of_freedom": run.report.gof.degrees_of_freedom,
        "gof_threshold": run.report.gof.threshold,
        "gof_passed": run.report.gof.passed,
        "mean_empirical": run.report.mean_check.empirical,
        "mean_analytic": run.report.mean_check.analytic,
        "mean_std_error": run.report.mean_check.std_error,
        "mean_passed": run.report.mean_check.passed,
        "var_empirical": run.report.var_check.empirical,
        "var_analytic": run.report.var_check.analytic,
        "var_rel_tol": run.report.var_check.rel_tol,
        "var_passed": run.report.var_check.passed,
        "coupling_violations": run.coupling_violations,
        "overall": run.report.overall,
    })
    return meta


def simulate_text(run: ScenarioRun, fmt: str, alpha: float,
                  horizon: float = None) -> str:
    """The exact text the simulate command emits for this run."""
    meta = simulate_metadata(run, alpha, horizon=horizon)
    k = run.report.scenario.params["k"]
    rows = [
        ((x - 1) // int(k), x, run.observed.get(x, 0), expected)
        for x, expected in sorted(run.expected_counts.items())
    ]
    if fmt == "csv":
        return render_csv(meta, ("n", "x", "observed", "expected"), rows)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "metadata": {key: value for key, value in meta.items()
                     if key not in ("command", "schema_version")},
        "report": run.report.to_dict(),
        "empirical": [
            {"n": n, "x": x, "observed": obs, "expected": exp}
            for n, x, obs, exp in rows
        ],
    }
    return render_json(payload)


@dataclass(frozen=True)
class CriterionResult:
    """Verdict for one cross-validation check."""

    number: int
    name: str
    passed: bool
    detail: str


def _check_ode_grid() -> CriterionResult:
    import time

    worst_gap, worst_elapsed = 0.0, 0.0
    for lam, k, t in ODE_GRID:
        params = ProcessParams(lam, k)
        start = time.perf_counter()
        solution = solve_forward_odes(params, t)
        worst_elapsed = max(worst_elapsed, time.perf_counter() - start)
        closed = harris_pmf(params.harris_at(t), np.arange(solution.n_max + 1))
        worst_gap = max(worst_gap, float(np.abs(solution.probs - closed).max()))
    passed = worst_gap < 1e-8 and worst_elapsed < 1.0
    return CriterionResult(
        1, "forward-equations-vs-closed-form", passed,
        f"max-abs gap {worst_gap:.3e} (budget 1e-08); slowest solve "
        f"{worst_elapsed:.3f}s (budget 1s)",
    )


def _check_quadrature_grid() -> CriterionResult:
    worst = 0.0
    for a, t, k in QUAD_GRID:
        params = MixtureParams(a, k)
        for n in range(21):
            gap = abs(mixture_pmf(params, t, n) - mixture_pmf_quadrature(params, t, n))
            worst = max(worst, gap)
    return CriterionResult(
        2, "mixture-quadrature-vs-closed-form", worst < 1e-8,
        f"max-abs gap {worst:.3e} (budget 1e-08)",
    )


def _check_birth_mc(replicas: int, seed: int, threads: int):
    run = run_scenario("birth", lam=0.5, k=2, t=1.0, replicas=replicas,
                       seed=seed, alpha=0.01, threads=threads)
    report = run.report
    passed = report.overall
    detail = (
        f"gof stat {report.gof.statistic:.3f} vs threshold "
        f"{report.gof.threshold:.3f}; mean {report.mean_check.empirical:.4f} "
        f"in {report.mean_check.analytic:.4f}+/-{3 * report.mean_check.std_error:.4f}; "
        f"var {report.var_check.empirical:.4f} within 5% of "
        f"{report.var_check.analytic:.4f}"
    )
    return CriterionResult(3, "model1-monte-carlo-law", passed, detail), run


def _check_mixture_mc(draws: int, seed: int) -> CriterionResult:
    run = run_scenario("mixture", a=1.0, k=2, t=1.0, replicas=draws,
                       seed=seed, alpha=0.01)
    report = run.report
    detail = (
        f"gof stat {report.gof.statistic:.3f} vs threshold "
        f"{report.gof.threshold:.3f}; mean {report.mean_check.empirical:.4f} "
        f"in 2+/-{3 * report.mean_check.std_error:.4f}; var "
        f"{report.var_check.empirical:.4f} within 5% of 4"
    )
    return CriterionResult(4, "model2-monte-carlo-law", report.overall, detail)


def _check_yule_furry(replicas: int, seed: int, threads: int):
    params = ProcessParams(1.0, 1)
    t = 0.7
    q = math.exp(-t)
    solution = solve_forward_odes(params, t)
    closed = decap_geometric_pmf(q, np.arange(1, solution.n_max + 2))
    ode_gap = float(np.abs(solution.probs - closed).max())

    trajectories = simulate_many(params, t, replicas, seed, threads=threads)
    violations = sum(traj.coupling_violations() for traj in trajectories)
    observed = empirical_distribution(trajectories, t)
    gof = chi_square_gof(
        observed,
        lambda x: decap_geometric_pmf(q, x),
        params.harris_at(t).support_values(),
        replicas,
        0.01,
    )
    passed = ode_gap < 1e-8 and gof.passed
    detail = (
        f"ode gap {ode_gap:.3e} (budget 1e-08); gof stat {gof.statistic:.3f} "
        f"vs threshold {gof.threshold:.3f}"
    )
    return CriterionResult(5, "yule-furry-reduction", passed, detail), violations


def _check_identities() -> CriterionResult:
    worst_nb = 0.0
    worst_pgf_one = 0.0
    worst_deriv = 0.0
    h = 1e-5
    for m in IDENTITY_GRID_M:
        for k in IDENTITY_GRID_K:
            params = HarrisParams(m, k)
            ns = np.arange(51)
            nb = nb_pmf(1.0 / k, 1.0 / m, ns)
            hp = harris_pmf(params, ns)
            rel = np.abs(hp - nb) / np.maximum(np.maximum(hp, nb), 1e-300)
            worst_nb = max(worst_nb, float(rel.max()))
            worst_pgf_one = max(worst_pgf_one, abs(harris_pgf(params, 1.0) - 1.0))
            deriv = (harris_pgf(params, 1.0 + h) - harris_pgf(params, 1.0 - h)) / (2 * h)
            worst_deriv = max(worst_deriv, abs(deriv - m) / m)
    passed = worst_nb <= 1e-14 and worst_pgf_one <= 1e-12 and worst_deriv <= 1e-5
    return CriterionResult(
        7, "identity-suite", passed,
        f"nb identity gap {worst_nb:.1e} (budget 1e-14); pgf(1) gap "
        f"{worst_pgf_one:.1e} (budget 1e-12); pgf'(1) rel err {worst_deriv:.3e} "
        f"(budget 1e-05)",
    )


def _check_calibration(n_seeds: int, draws_per_seed: int) -> CriterionResult:
    params = HarrisParams(2.0, 2)
    rejections = 0
    for seed in range(n_seeds):
        draws = sample_harris(RngStream(seed), params, size=draws_per_seed)
        values, counts = np.unique(draws, return_counts=True)
        observed = {int(v): int(c) for v, c in zip(values, counts)}
        gof = chi_square_gof(
            observed,
            lambda x: harris_pmf(params, (x - 1) // 2),
            params.support_values(),
            draws_per_seed,
            0.05,
        )
        rejections += not gof.passed
    rate = rejections / n_seeds
    return CriterionResult(
        8, "null-calibration", 0.01 <= rate <= 0.11,
        f"rejection rate {rate:.3f} over {n_seeds} seeds (band [0.01, 0.11])",
    )


def _check_determinism(replicas: int, seed: int, threads: int) -> CriterionResult:
    texts = []
    for fmt in ("csv", "json"):
        pair = []
        for _ in range(2):
            run = run_scenario("birth", lam=0.5, k=2, t=1.0, replicas=replicas,
                               seed=seed, alpha=0.01, threads=threads)
            pair.append(simulate_text(run, fmt, 0.01))
        texts.append(pair[0] == pair[1])
    passed = all(texts)
    return CriterionResult(
        9, "byte-identical-reruns", passed,
        f"csv rerun identical: {texts[0]}; json rerun identical: {texts[1]}",
    )


def run_acceptance(birth_replicas: int = DEFAULT_BIRTH_REPLICAS,
                   mixture_draws: int = DEFAULT_MIXTURE_DRAWS,
                   calibration_seeds: int = DEFAULT_CALIBRATION_SEEDS,
                   calibration_draws: int = DEFAULT_CALIBRATION_DRAWS,
                   seed: int = 42, threads: int = 1) -> list:
    """Run every cross-validation criterion; returns one result per check."""
    results = [_check_ode_grid(), _check_quadrature_grid()]
    birth_result, birth_run = _check_birth_mc(birth_replicas, seed, threads)
    results.append(birth_result)
    results.append(_check_mixture_mc(mixture_draws, seed))
    yule_result, yule_violations = _check_yule_furry(birth_replicas, seed, threads)
    results.append(yule_result)
    violations = birth_run.coupling_violations + yule_violations
    results.append(CriterionResult(
        6, "coupling-identity", violations == 0,
        f"{violations} violations of state = 1 + k*count across "
        f"{2 * birth_replicas} trajectories",
    ))
    results.append(_check_identities())
    results.append(_check_calibration(calibration_seeds, calibration_draws))
    results.append(_check_determinism(birth_replicas, seed, threads))
    return sorted(results, key=lambda r: r.number)
