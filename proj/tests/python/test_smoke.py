import math

import numpy as np
import pytest

import anytime_o2b as ao


def test_anytime_run_matches_its_regret_bound():
    res = ao.run_single(ao.make_config("anytime", T=2000), seed=3)
    assert not res.aborted
    assert res.rows[0].t == 1 and res.rows[-1].t == 2000
    for row in res.rows:
        assert row.subopt_x <= row.measured_regret / row.alpha_cum + 1e-8
    assert res.diagnostics.max_identity_error <= 1e-9


def test_runs_are_deterministic_per_seed():
    cfg = ao.make_config("accelerated", T=500, sigma=0.5)
    a = [r.primary_subopt for r in ao.run_single(cfg, 1).rows]
    b = [r.primary_subopt for r in ao.run_single(cfg, 1).rows]
    c = [r.primary_subopt for r in ao.run_single(cfg, 2).rows]
    assert a == b
    assert a != c


def test_accelerated_reports_step_size_sums():
    res = ao.run_single(ao.make_config("accelerated", T=300), 0)
    sums = res.diagnostics.step_size_sums
    assert sums is not None
    cB = 2.0 * 4.0
    assert sums.times_eta <= 2 * cB * math.sqrt(1 + sums.weighted_sq) + 1e-8
    assert res.rows[-1].subopt_y is not None


def test_sweep_and_rate_fit():
    cfg = ao.make_config("optimistic", T=4096, seeds=range(4))
    runs = ao.run_experiment(cfg)
    assert [r.seed for r in runs] == [0, 1, 2, 3]
    agg = ao.aggregate(runs)
    assert agg[-1].n_seeds == 4
    fit = ao.fit_rate([(a.t, a.mean) for a in agg])
    assert fit.slope < -1.35
    assert ao.fit_rate(runs[0].rows).slope == pytest.approx(fit.slope, abs=1e-9)


def test_problem_access():
    spec = ao.ProblemSpec()
    spec.dim = 4
    p = ao.build_problem(spec)
    x = np.zeros(4)
    g = p.gradient(x)
    assert g.shape == (4,)
    assert p.suboptimality(p.x_star) == 0.0
    assert np.linalg.norm(p.project(100 * np.ones(4))) == pytest.approx(p.diameter / 2)
    assert p.gradient_bound() >= np.linalg.norm(g)


def test_bounds():
    assert ao.optimistic_rate_bound(1, 1, 0, 10000) == pytest.approx(4 * math.sqrt(10) * 1e-6)
    assert ao.strongly_convex_linear_weight_bound(1, 1, 1, 3) == pytest.approx(2.0)
    assert ao.anytime_high_probability_bound(6, 1, 0, "linear", 3, 0.5) == pytest.approx(1.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ao.ConfigError):
        ao.make_config("optimistic", learner="adaptive-ogd")
    with pytest.raises(ValueError):
        ao.make_config("general-sc", mu_surrogate=-1.0)
    with pytest.raises(TypeError):
        ao.make_config("anytime", bogus=1)
    with pytest.raises(ao.AnalysisError):
        ao.fit_rate([(1, 1.0), (2, 0.5)])
