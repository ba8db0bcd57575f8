"""The core/leaf benchmark at demo scale.

Generates both synthetic scenarios, runs the cross-validated grid search
for all four kernels, and prints the accuracy table. The class signal
sits in the factor subspaces in the leaf scenario and in the core in the
core scenario, which is exactly what separates the kernels.

Run as `python demos/05_synthetic_benchmark.py` (about two minutes).
"""

import numpy as np

from stmkernels import ExperimentConfig, SynthConfig, emit_report, run_experiment

for scenario in ("leaf", "core"):
    cfg = ExperimentConfig(
        synth=SynthConfig(scenario=scenario, mode_size=30, r_exact=3,
                          r_approx=3, samples_per_class=12, seed=0),
        noise_grid=(0.01,),
        kernels=("gaussian", "dusk", "subspace", "wsek"),
        rank_grid=(3,),
        c_grid=tuple(2.0 ** k for k in range(-6, 7, 2)),
        g_grid=tuple(2.0 ** k for k in range(-2, 9, 2)),
        repeats=3,
        folds=4,
        seed=0,
    )
    report = run_experiment(cfg)
    print(f"\n=== {scenario} scenario (noise 0.01, rank 3) ===")
    print(f"{'kernel':<10}{'accuracy':>9}{'+/-':>7}{'C':>8}{'g':>8}"
          f"{'gram s':>8}{'train s':>9}")
    for row in report.rows:
        print(f"{row.kernel:<10}{row.mean_acc:>9.3f}{row.ci95:>7.3f}"
              f"{row.C:>8.2f}{row.g:>8.2f}{row.kernel_seconds:>8.2f}"
              f"{row.train_seconds:>9.2f}")

    csv_path, json_path = emit_report(report, f"demo_report_{scenario}")
    print("written:", csv_path, "and", json_path)

print("""
Expected pattern: everything but the Gaussian kernel is strong in the
leaf scenario, and the Gaussian kernel leads in the core scenario with
wsek following. The subspace kernel carries no core-scenario signal at
all; at this demo scale its accuracy there is inflated by hyperparameter
selection noise, and it falls toward chance once the sample count grows
(see tests/test_acceptance.py for the full-size cells).""")
