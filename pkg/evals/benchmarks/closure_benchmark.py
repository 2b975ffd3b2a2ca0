"""
Benchmark module for two-cut closure of random Fourier curves.
"""

from typing import Any, Dict, Optional, Sequence

from src.closure_evaluator import ClosureEvaluator
from src.config import RunConfig
from src.curve_family import CurveFamily
from src.solver import TWO_CUT, Inconclusive, find_all_two_cut, solve_two_cut


def run_benchmark(
    config: Optional[RunConfig] = None,
    windings: Sequence[int] = (1, -1, 2, -2),
    size: int = 20,
    seed: int = 42,
    oracle_resolution: Optional[int] = 500,
) -> Dict[str, Any]:
    """
    Run the two-cut closure benchmark.

    Args:
        config: Solver configuration
        windings: Total-turning multiples cycled through the dataset
        size: Number of test curves to generate
        seed: Random seed for reproducibility
        oracle_resolution: Oracle grid per axis, or None to skip the cross-check

    Returns:
        dict: Benchmark results including:
            - overall_binary_score: Fraction of curves closed as predicted
            - overall_oracle_agreement: Fraction of solved curves the oracle confirms
            - max_residual: Largest residual among solved curves
            - test_cases: List of individual test case results
    """
    evaluator = ClosureEvaluator(config, oracle_resolution)
    dataset = CurveFamily(seed).generate_dataset(size=size, windings=windings)

    results = {
        "overall_binary_score": 0.0,
        "overall_oracle_agreement": 0.0,
        "max_residual": 0.0,
        "test_cases": [],
    }

    total_binary_score = 0.0
    agreements = []

    for entry in dataset:
        result = evaluator.evaluate_closure(
            entry["curve"], TWO_CUT, lambda curve, sigma, cfg: solve_two_cut(curve, cfg)
        )
        if abs(entry["winding"]) >= 2:
            result["solutions"] = _count_solutions(entry["curve"], evaluator.config)
        results["test_cases"].append({"id": entry["id"], "winding": entry["winding"], **result})

        total_binary_score += result["binary_score"]
        if "oracle_agrees" in result:
            agreements.append(result["oracle_agrees"])
        if result["outcome"] == "solved":
            results["max_residual"] = max(results["max_residual"], result["residual"])

    results["overall_binary_score"] = total_binary_score / size
    if agreements:
        results["overall_oracle_agreement"] = sum(agreements) / len(agreements)
    return results


def _count_solutions(curve, config: RunConfig) -> int:
    try:
        return len(find_all_two_cut(curve, config))
    except Inconclusive:
        return 0

