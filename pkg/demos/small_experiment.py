"""A small Monte Carlo run over two sizes and three densities.

The same configuration can be run from the shell:
    minrank experiment demos/small_experiment.cfg --out results/
"""
from pathlib import Path

from minrank import load_config, run_experiment, summarize_records

cfg = load_config(Path(__file__).with_name("small_experiment.cfg"))
rows = summarize_records(run_experiment(cfg))
for row in rows:
    print(
        f"v={row['v']:<4} p={row['p']:<5} mean kappa={row['mean_kappa']:.2f}  "
        f"Pr[kappa=delta]={row['frac_kappa_eq_delta']:.2f}  "
        f"in Chernoff windows={row['frac_edges_and_degrees_in_interval']:.2f}"
    )
