"""
Script to run the two-cut closure evaluation.
"""

from evals.benchmarks.closure_benchmark import run_benchmark
from .config import RunConfig


def main():
    config = RunConfig()

    print("\n=== Evaluation Setup ===")
    print(f"Quadrature resolution: {config.resolution}")
    print(f"Residual tolerance: {config.residual_tol:g} * c")
    print(f"Threads: {config.threads}")
    print("=" * 80)

    task = {
        "windings": (1, -1, 2, -2),
        "size": 8,
        "seed": 42,
        "oracle_resolution": 500,
    }

    print("\n=== Task Configuration ===")
    for key, value in task.items():
        print(f"{key}: {value}")
    print("=" * 80)

    print("\nRunning evaluation...")
    results = run_benchmark(config=config, **task)

    print(f"\n=== Results ===")
    print(f"Overall Binary Score: {results['overall_binary_score']:.2%}")
    print(f"Oracle Agreement: {results['overall_oracle_agreement']:.2%}")
    print(f"Max Residual: {results['max_residual']:.3e}")
    print("\nDetailed Results:")
    print("-" * 80)

    for case in results["test_cases"]:
        print(f"Test Case {case['id']} (m = {case['winding']}):")
        print(f"Outcome: {case['outcome']} (expected {case['expected']})")
        if case["outcome"] == "solved":
            cuts = ", ".join(f"{c:.9f}" for c in case["cuts"])
            print(f"Cuts: ({cuts})")
            print(f"Residual: {case['residual']:.3e} via {case['method']}")
            print(f"Tangent Mismatch: {case['tangent_mismatch']:.3e}")
        if "oracle_agrees" in case:
            print(
                f"Oracle: best {case['oracle_residual']:.3e}, "
                f"nearest node {case['nearest_grid_residual']:.3e}"
            )
        if "solutions" in case:
            print(f"Distinct Solutions: {case['solutions']}")

        residual = case["residual"]
        if case["outcome"] != "solved":
            interpretation = "No closure found"
        elif residual <= 1e-12:
            interpretation = "Closed to rounding"
        elif residual <= config.residual_tol:
            interpretation = "Closed within tolerance"
        else:
            interpretation = "Residual above tolerance"

        print(f"Interpretation: {interpretation}")
        print("-" * 80)


if __name__ == "__main__":
    main()
