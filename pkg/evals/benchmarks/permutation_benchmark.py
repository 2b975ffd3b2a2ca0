"""
Benchmark module for k-arc closure over permutations of S_k.
"""

from itertools import permutations
from typing import Any, Dict, Optional

from src.closure_evaluator import ClosureEvaluator
from src.config import RunConfig
from src.curve_family import CurveFamily
from src.perm_sampler import PermutationSampler
from src.rearrange import Perm
from src.solver import solve_k


def run_benchmark(
    config: Optional[RunConfig] = None,
    k: int = 4,
    winding: int = 1,
    seed: int = 42,
    strategy: Optional[str] = None,
    count: int = 24,
) -> Dict[str, Any]:
    """
    Run solve_k for every sigma in S_k, or for sampled ones, on one random test curve.

    Args:
        config: Solver configuration
        k: Number of arcs
        winding: Total-turning multiple of the test curve
        seed: Random seed for reproducibility
        strategy: PermutationSampler strategy; None runs all of S_k
        count: Number of sampled permutations when a strategy is given

    Returns:
        dict: Benchmark results including:
            - overall_binary_score: Fraction of permutations whose outcome matches
              the characterization (solved iff sigma is no cyclic shift)
            - min_margin: Smallest arc length over solved permutations
            - max_residual: Largest residual over solved permutations
            - test_cases: List of individual test case results
    """
    evaluator = ClosureEvaluator(config)
    curve = CurveFamily(seed).fourier_curve(winding)

    results = {
        "overall_binary_score": 0.0,
        "min_margin": float("inf"),
        "max_residual": 0.0,
        "test_cases": [],
    }

    total_binary_score = 0.0
    if strategy is None:
        cases = [Perm(values) for values in permutations(range(1, k + 1))]
    else:
        cases = PermutationSampler(seed).sample(k, strategy, count)

    for i, sigma in enumerate(cases):
        result = evaluator.evaluate_closure(curve, sigma, solve_k)
        results["test_cases"].append({"id": i, **result})

        total_binary_score += result["binary_score"]
        if result["outcome"] == "solved":
            results["min_margin"] = min(results["min_margin"], result["margin"])
            results["max_residual"] = max(results["max_residual"], result["residual"])

    results["overall_binary_score"] = total_binary_score / len(cases)
    return results
