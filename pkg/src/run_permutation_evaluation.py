"""
Script to run the k-arc permutation closure evaluation.
"""

from evals.benchmarks.permutation_benchmark import run_benchmark
from .config import RunConfig


def main():
    config = RunConfig()

    print("\n=== Permutation Closure Evaluation Setup ===")
    print(f"Quadrature resolution: {config.resolution}")
    print(f"Residual tolerance: {config.k_residual_tol:g} * c")
    print("=" * 80)

    task = {
        "k": 4,
        "winding": 1,
        "seed": 42,
        "strategy": None,
    }

    print("\n=== Task Configuration ===")
    for key, value in task.items():
        print(f"{key}: {value}")
    print("=" * 80)

    print("\nRunning permutation closure evaluation...")
    results = run_benchmark(config=config, **task)

    print(f"\n=== Results ===")
    print(f"Overall Binary Score: {results['overall_binary_score']:.2%}")
    print(f"Smallest Margin: {results['min_margin']:.4f}")
    print(f"Max Residual: {results['max_residual']:.3e}")
    print("\nDetailed Results:")
    print("-" * 80)

    for case in results["test_cases"]:
        print(f"Sigma [{case['sigma']}]: {case['outcome']} (expected {case['expected']})")
        if case["outcome"] == "solved":
            cuts = ", ".join(f"{c:.6f}" for c in case["cuts"])
            print(f"  cuts ({cuts}), residual {case['residual']:.3e}, margin {case['margin']:.4f}")
        else:
            print(f"  {case['reason']}")
    print("-" * 80)


if __name__ == "__main__":
    main()
