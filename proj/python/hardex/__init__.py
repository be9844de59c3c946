"""Exact worst-case approximation ratios via decision trees and rational LPs.

Thin wrapper over the compiled extension: tree/ratio results come back as
plain dicts with all rationals rendered as "p/q" strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence, Union

from . import _core

__version__ = _core.__version__

BudgetExceededError = _core.BudgetExceededError

JobLike = Union[str, int, Fraction]


def _job_str(job: JobLike) -> str:
    if isinstance(job, Fraction):
        return f"{job.numerator}/{job.denominator}" if job.denominator != 1 else str(job.numerator)
    return str(job)


def lpt_tree(n: int, m: int, *, prune_interior: bool = True, annotate_max: bool = False,
             max_nodes: int = 500000, fmt: str = "json"):
    """Decision tree of the greedy scheduler.

    Returns a dict for fmt="json", otherwise the DOT or text rendering.
    """
    out = _core.lpt_tree(n, m, prune_interior, annotate_max, max_nodes, fmt)
    return json.loads(out) if fmt == "json" else out


def lpt_ratio(n: int, m: int, *, check1: bool = True, check2: bool = True, workers: int = 1,
              prune_interior: bool = True, binary_search: bool = False, tol: str = "1/1000",
              epsilon: str = "1/1000000", max_nodes: int = 500000) -> dict:
    """Worst-case ratio report: alpha, witness, assignments, stats."""
    return json.loads(_core.lpt_ratio(n, m, check1, check2, workers, prune_interior,
                                      binary_search, tol, epsilon, max_nodes))


def lpt_oracle(jobs: Sequence[JobLike], m: int) -> dict:
    """Brute-force makespans for one instance (jobs sorted nonincreasing)."""
    lpt, opt, ratio = _core.lpt_oracle([_job_str(j) for j in jobs], m)
    return {"lpt": lpt, "opt": opt, "ratio": ratio}


def alpha_fraction(report: dict) -> Fraction:
    """Exact alpha of a non-interval report as a Fraction."""
    alpha = report["alpha"]
    if "num" not in alpha:
        raise ValueError("interval report has no exact alpha")
    return Fraction(alpha["num"], alpha["den"])
