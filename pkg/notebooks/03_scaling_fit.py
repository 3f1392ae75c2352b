"""
Median spreading time against n
===============================

A small scaling sweep at an ultra-fast and a slow parameter point, followed by
the three-model growth fit.  The grid here is smaller than the acceptance run
so the script finishes in about a minute.
"""
from girgspread import ExperimentConfig, fit_growth, run_scaling_experiment

points = {"ultra-fast": (2.2, 1.1), "slow": (2.8, 4.0)}
for name, (tau, alpha) in points.items():
    cfg = ExperimentConfig(n_grid=[2 ** 10, 2 ** 12, 2 ** 14], tau=tau, alpha=alpha,
                           graphs_per_n=8, seed_base=3)
    fit = fit_growth(run_scaling_experiment(cfg))
    print(f"{name} (tau={tau}, alpha={alpha})")
    for n, m in zip(fit.ns, fit.medians):
        print(f"  n={n:8.0f}  median rounds {m:5.1f}")
    for k, coef in fit.coefficients.items():
        print(f"  {k:10s} {coef}  log-rss {fit.rss[k]:.3g}")
    print("  winner:", fit.winner)
