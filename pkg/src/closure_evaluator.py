"""
Module for scoring closure solvers against the brute-force grid oracle.
"""

import logging
import math
from typing import Any, Callable, Dict, Optional

import numpy as np

from .config import RunConfig
from .curve_kernel import TurningCurve, endpoint_norm, theta_rate, turning_multiple
from .perm import admits_proper_closure
from .rearrange import EndpointMap, Perm
from .solver import Inconclusive, Rejected, SolveResult, oracle_grid

logger = logging.getLogger(__name__)

Solver = Callable[[TurningCurve, Perm, RunConfig], SolveResult]


class ClosureEvaluator:
    def __init__(self, config: Optional[RunConfig] = None, oracle_resolution: Optional[int] = None):
        """
        Initialize the evaluator.

        Args:
            config: Solver configuration; defaults to RunConfig()
            oracle_resolution: Grid points per axis of the oracle, or None to
                skip the oracle cross-check
        """
        self.config = config or RunConfig()
        self.oracle_resolution = oracle_resolution

    def expected_outcome(self, curve: TurningCurve, sigma: Perm) -> str:
        """What the characterization predicts: "solvable" or "rejected"."""
        m = turning_multiple(curve, self.config.turning_tol)
        if not m or endpoint_norm(curve, self.config.resolution) <= self.config.closed_tol * curve.speed:
            return "rejected"
        return "solvable" if admits_proper_closure(sigma) else "rejected"

    def _oracle_check(self, curve: TurningCurve, result: SolveResult) -> Dict[str, Any]:
        """
        Oracle residual at the grid node nearest to the solver's cuts.

        Moving each cut by at most half a grid step changes e_sigma by no more
        than 2 * k * c * (1 + max |theta'|) * step.
        """
        oracle = oracle_grid(
            curve,
            result.sigma,
            self.oracle_resolution,
            self.config.oracle_budget,
            self.config.resolution,
        )
        step = 1.0 / self.oracle_resolution
        nearest = np.round(np.array(result.cuts.values) / step) * step
        nearest_residual = float(abs(EndpointMap(curve, result.sigma, self.config.resolution)(nearest)[0]))
        rate = theta_rate(curve, self.config.resolution)
        bound = 2.0 * result.k * curve.speed * (1.0 + rate) * step
        return {
            "oracle_residual": oracle.residual,
            "oracle_cuts": list(oracle.cuts.values),
            "nearest_grid_residual": nearest_residual,
            "oracle_agrees": nearest_residual <= bound and oracle.residual <= bound,
        }

    def evaluate_closure(self, curve: TurningCurve, sigma: Perm, solver: Solver) -> Dict[str, Any]:
        """
        Run one solver on one curve and score the outcome.

        Returns:
            dict: Evaluation metrics including:
                - binary_score: 1.0 if the outcome matches the prediction
                - outcome: "solved", "rejected" or "inconclusive"
                - residual, margin, tangent_mismatch, method for solved cases
        """
        expected = self.expected_outcome(curve, sigma)
        record: Dict[str, Any] = {
            "sigma": str(sigma),
            "expected": expected,
            "residual": math.nan,
            "margin": math.nan,
            "tangent_mismatch": math.nan,
            "method": None,
        }
        try:
            result = solver(curve, sigma, self.config)
        except Rejected as e:
            record["outcome"] = "rejected"
            record["reason"] = e.reason
        except Inconclusive as e:
            logger.warning("inconclusive for %s: %s", sigma, e)
            record["outcome"] = "inconclusive"
            record["reason"] = str(e)
        else:
            record.update(
                outcome="solved",
                residual=result.residual,
                margin=result.margin,
                tangent_mismatch=result.tangent_mismatch,
                method=result.method,
                cuts=list(result.cuts.values),
            )
            if self.oracle_resolution is not None and result.k <= 4:
                record.update(self._oracle_check(curve, result))

        matched = (record["outcome"] == "solved") == (expected == "solvable")
        if record["outcome"] == "inconclusive":
            matched = False
        record["binary_score"] = 1.0 if matched else 0.0
        return record
