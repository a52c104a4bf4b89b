import math

import numpy as np
import pytest

import fbplab


def stefan(T=0.25):
    return fbplab.validate(fbplab.problem(T=T))


def test_kernel_constants():
    k = fbplab.Kernel.epanechnikov()
    assert math.isclose(k.c_star(), 10.0, rel_tol=1e-12)
    assert math.isclose(k.c_zero(), 16.0 / 3.0, rel_tol=1e-12)
    assert k(0.0) == pytest.approx(0.75)
    assert k(1.5) == 0.0
    assert fbplab.Kernel.by_name("quartic").c_star() == pytest.approx(14.0)


def test_config_round_trip():
    cfg = fbplab.problem(mu=2.0, reaction={"family": "fisher_kpp", "a": 1.0, "b": 1.0})
    d = fbplab.problem_to_dict(cfg)
    assert d["mu"] == 2.0
    assert d["reaction"]["family"] == "fisher_kpp"
    assert fbplab.problem_to_dict(fbplab.ProblemConfig.from_json(cfg.to_json())) == d


def test_violations_name_the_hypothesis():
    bad = fbplab.problem(initial={"family": "quadratic_bump", "V": 0.0})
    ids = [v.hypothesis for v in fbplab.violations(bad)]
    assert "initial_profile" in ids
    with pytest.raises(fbplab.FbpError) as info:
        fbplab.validate(bad)
    assert info.value.code == "InvalidConfig"


def test_local_solve():
    sol = fbplab.solve_local(stefan(), N=128, dt=1e-3, intervals=8)
    b = sol.boundary
    assert b.shape[1] == 3
    assert b[-1, 0] == pytest.approx(0.25)
    assert np.all(np.diff(b[:, 2]) > 0)
    assert abs(b[-1, 1] + b[-1, 2]) < 1e-10
    assert len(sol.profiles) == 9
    p = sol.profiles[-1]
    assert p.v.min() >= 0.0
    assert sol.sample(0.25, 0.0) == pytest.approx(p.sample(0.0))
    assert fbplab.symmetry_defect(sol) < 1e-10


def test_nonlocal_solve_and_errors():
    cfg = stefan()
    sol = fbplab.solve_nonlocal(cfg, eps=0.1)
    assert sol.dx == pytest.approx(0.1 / 8)
    ref = fbplab.solve_local(cfg, N=256, dt=1e-3)
    report = fbplab.sup_error(sol, ref)
    assert 0.0 < report.overall_sup < 1.0
    assert len(report.per_time_sup) == 65
    with pytest.raises(fbplab.FbpError) as info:
        fbplab.solve_nonlocal(cfg, eps=0.1, dx=0.1 / 4)
    assert info.value.code == "ResolutionTooCoarse"


def test_rate_fit():
    fit = fbplab.fit_rate([(0.2, 0.2**0.5), (0.1, 0.1**0.5), (0.05, 0.05**0.5)])
    assert fit.gamma_hat == pytest.approx(0.5, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(fbplab.FbpError):
        fbplab.fit_rate([(0.2, 0.1), (0.1, 0.05)])


def test_mass_and_sandwich():
    cfg = stefan()
    sol = fbplab.solve_local(cfg, N=256, dt=5e-4)
    res = fbplab.mass_residual(sol, cfg.config, 1.0)
    assert res[0][1] == 0.0
    assert max(abs(r) for _, r in res) < 1e-3
    up = fbplab.solve_local(cfg, N=256, dt=5e-4, knobs=fbplab.PerturbationKnobs.upper(0.05, 0.4))
    lo = fbplab.solve_local(cfg, N=256, dt=5e-4, knobs=fbplab.PerturbationKnobs.lower(0.05, 0.4))
    assert fbplab.sandwich_check(lo, sol, up, 1e-4, 1e-6).ok
    assert not fbplab.sandwich_check(up, sol, lo).ok


def test_verify_kernel_suite():
    results = fbplab.verify("kernel")
    assert results and all(r.passed for r in results)
