"""End-to-end: run a reduced power sweep, summarize it, and render a figure.

Equivalent to the CLI pipeline

    uavsec presets --out presets
    uavsec run presets/sweep_power.yaml --out results.csv --trials 3
    uavsec summarize results.csv --out summary.csv
    plotgen render --summary summary.csv --kind power --out power.png

but driven through the library API (the figure step needs the separate
``plotgen`` package).

Run:  python demos/04_sweep_and_plot.py
"""

import os
import tempfile

from uavsec.harness.config import parse_config, preset_configs
from uavsec.harness.runner import run_sweep, summarize

workdir = tempfile.mkdtemp(prefix="uavsec_demo_")
results_csv = os.path.join(workdir, "results.csv")
summary_csv = os.path.join(workdir, "summary.csv")

config = preset_configs()["sweep_power"]
config["radio"]["n_elements"] = 12  # keep the demo quick
config["run"]["trials"] = 3
spec = parse_config(config)

rows = run_sweep(spec, results_csv)
print(f"wrote {len(rows)} result rows to {results_csv}")

summary = summarize(results_csv, summary_csv)
print(f"wrote {len(summary)} summary rows to {summary_csv}\n")
print("mode, power (dBm), mean rate (bits/s/Hz)")
for s in summary:
    print(f"  {s.mode:10s} {s.sweep_value:5.0f}  {s.mean:7.3f} +- {s.stderr:.3f}")

try:
    from plotgen import render

    out_png = os.path.join(workdir, "power.png")
    modes = render(summary_csv, "power", out_png)
    print(f"\nrendered {out_png} with curves for {', '.join(modes)}")
except ImportError:
    print("\n(plotgen not installed; skipping the figure step)")
