"""Local and nonlocal free boundary problem solvers."""

import json

from ._core import (
    CheckResult,
    ErrorReport,
    FbpError,
    Kernel,
    LocalSolution,
    NonlocalSolution,
    NonlocalVariant,
    PerturbationKnobs,
    ProblemConfig,
    Profile,
    RateFit,
    SandwichReport,
    Trajectory,
    ValidatedConfig,
    Violation,
    fit_rate,
    mass_residual,
    sandwich_check,
    solve_local,
    solve_nonlocal,
    sup_error,
    symmetry_defect,
    validate,
    verify,
    violations,
)

__version__ = "0.1.0"


def problem(d=1.0, mu=1.0, h0=1.0, T=1.0, reaction=None, initial=None):
    """ProblemConfig from keyword arguments.

    reaction and initial take the same dicts as the JSON config format, e.g.
    {"family": "fisher_kpp", "a": 1, "b": 1} or {"family": "quadratic_bump", "V": 1}.
    """
    spec = {
        "d": d,
        "mu": mu,
        "h0": h0,
        "T": T,
        "reaction": reaction or {"family": "zero"},
        "initial": initial or {"family": "quadratic_bump", "V": 1.0},
    }
    return ProblemConfig.from_json(json.dumps(spec))


def problem_to_dict(config):
    return json.loads(config.to_json())
