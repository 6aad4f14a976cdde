"""Compare the four benchmark modes on a small common ensemble.

Modes: aerial or fixed ground transmitter, with or without the reflecting
surface.  Ground modes pin the transmitter at the benchmark position and
skip the placement step; no-surface modes zero the surface legs and skip
the reflection step.

Run:  python demos/03_mode_comparison.py
"""

import numpy as np

from uavsec import SmallScaleDraw, ao
from uavsec.harness.config import parse_config, preset_configs, scenario_for
from uavsec.harness.runner import mix_seed

spec = parse_config(preset_configs()["sweep_power"])
trials = 8
power_dbm = 45.0

print(f"{trials} trials per mode at {power_dbm:.0f} dBm, 16 elements\n")
for mode in spec.modes:
    scenario, cfg = scenario_for(spec, mode, power_dbm)
    scenario = scenario.with_updates(radio=type(scenario.radio)(
        **{**scenario.radio.__dict__, "n_elements": 16}))
    rates = []
    for t in range(trials):
        seed = mix_seed(spec.base_seed, t, 0)
        draw = SmallScaleDraw.generate(scenario.layout, scenario.radio, seed)
        rates.append(ao.solve(scenario, draw, cfg=cfg).final_rate)
    print(f"  {mode:10s} mean {np.mean(rates):6.3f}  min {np.min(rates):6.3f}  "
          f"max {np.max(rates):6.3f} bits/s/Hz")
