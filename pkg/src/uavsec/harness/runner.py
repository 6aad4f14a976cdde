"""Seeded sweep execution, results CSV, and summary aggregation.

Every trial's random draw is keyed by ``mix_seed(base_seed, trial, sweep)``,
a SplitMix64 hash of the three indices, so trials are independent of
execution order and the whole sweep is reproducible bit-for-bit.  Results
are written atomically (temp file plus rename) with a two-line comment
header: a timestamp and a SHA-256 of every byte that follows it, so two
runs can be compared by ignoring the first line only.
"""

import concurrent.futures
import hashlib
import math
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone

from .. import ao
from ..channel import SmallScaleDraw
from ..exceptions import SchemaError
from .config import scenario_for

RESULTS_HEADER = "scenario_id,mode,trial_seed,sweep_axis,sweep_value,secrecy_rate_bps_hz,iterations,status"
SUMMARY_HEADER = "mode,sweep_axis,sweep_value,mean_secrecy_rate_bps_hz,stderr_secrecy_rate_bps_hz,n_trials"

_MASK64 = (1 << 64) - 1


def _splitmix64(z):
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def mix_seed(base_seed, trial_index, sweep_index):
    """Per-trial 64-bit seed from the base seed and the two grid indices.

    Defined as SplitMix64 applied to ``base + GOLDEN*(trial+1)`` and then
    again after adding ``GOLDEN2*(sweep+1)``; fixed for reproducibility.
    """
    z = (base_seed + 0x9E3779B97F4A7C15 * (trial_index + 1)) & _MASK64
    z = _splitmix64(z)
    z = (z + 0xD1B54A32D192ED03 * (sweep_index + 1)) & _MASK64
    return _splitmix64(z)


def fmt9(x):
    """Float formatting used in all CSV output: 9 significant digits."""
    return f"{float(x):.9g}"


@dataclass(frozen=True)
class ResultRow:
    scenario_id: str
    mode: str
    trial_seed: int
    sweep_axis: str
    sweep_value: float
    secrecy_rate: float
    iterations: int
    status: str
    sort_key: tuple = ()

    def to_csv(self):
        return ",".join(
            [
                self.scenario_id,
                self.mode,
                str(self.trial_seed),
                self.sweep_axis,
                fmt9(self.sweep_value),
                fmt9(self.secrecy_rate),
                str(self.iterations),
                self.status,
            ]
        )


def run_trial(spec, mode, sweep_index, sweep_value, trial_index):
    """One (mode, sweep point, trial) cell: draw, solve, summarize into a row."""
    scenario, cfg = scenario_for(spec, mode, sweep_value)
    seed = mix_seed(spec.base_seed, trial_index, sweep_index)
    draw = SmallScaleDraw.generate(scenario.layout, scenario.radio, seed)
    report = ao.solve(scenario, draw, cfg=cfg)
    return ResultRow(
        scenario_id=spec.scenario_id,
        mode=mode,
        trial_seed=seed,
        sweep_axis=spec.sweep_axis,
        sweep_value=float(sweep_value),
        secrecy_rate=max(0.0, report.final_rate),
        iterations=report.iterations,
        status=report.status,
        sort_key=(mode, sweep_index, trial_index),
    )


def _run_task(args):
    return run_trial(*args)


def run_sweep(spec, out_path, threads=1):
    """Execute the full sweep grid and write the results CSV atomically.

    Trials are independent; with ``threads > 1`` they run in a process
    pool. Rows are sorted by (mode, sweep index, trial index) before
    writing, so the output is identical regardless of scheduling.
    """
    tasks = [
        (spec, mode, si, sv, ti)
        for mode in spec.modes
        for si, sv in enumerate(spec.sweep_values)
        for ti in range(spec.trials)
    ]
    if threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_run_task, tasks, chunksize=4))
    else:
        rows = [run_trial(*t) for t in tasks]
    rows.sort(key=lambda r: r.sort_key)
    write_results(rows, out_path)
    return rows


def _atomic_write(text, out_path):
    directory = os.path.dirname(os.path.abspath(out_path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_results(rows, out_path):
    body = RESULTS_HEADER + "\n" + "".join(r.to_csv() + "\n" for r in rows)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    stamp = datetime.now(timezone.utc).isoformat()
    text = f"# generated_at={stamp}\n# sha256={digest}\n" + body
    _atomic_write(text, out_path)


def read_results(path):
    """Parse a results CSV back into rows; raises SchemaError on mismatch."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != RESULTS_HEADER:
        raise SchemaError(f"{path}: expected header '{RESULTS_HEADER}'")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 8:
            raise SchemaError(f"{path}:{i}: expected 8 fields, got {len(parts)}")
        try:
            rows.append(
                ResultRow(
                    scenario_id=parts[0],
                    mode=parts[1],
                    trial_seed=int(parts[2]),
                    sweep_axis=parts[3],
                    sweep_value=float(parts[4]),
                    secrecy_rate=float(parts[5]),
                    iterations=int(parts[6]),
                    status=parts[7],
                )
            )
        except ValueError as exc:
            raise SchemaError(f"{path}:{i}: {exc}")
    return rows


@dataclass(frozen=True)
class SummaryRow:
    mode: str
    sweep_axis: str
    sweep_value: float
    mean: float
    stderr: float
    n_trials: int

    def to_csv(self):
        return ",".join(
            [
                self.mode,
                self.sweep_axis,
                fmt9(self.sweep_value),
                fmt9(self.mean),
                fmt9(self.stderr),
                str(self.n_trials),
            ]
        )


def summarize_rows(rows):
    axes = {r.sweep_axis for r in rows}
    if len(axes) > 1:
        raise SchemaError(f"results mix sweep axes: {sorted(axes)}")
    groups = {}
    for r in rows:
        groups.setdefault((r.mode, r.sweep_value), []).append(r.secrecy_rate)
    out = []
    for (mode, value), rates in sorted(groups.items()):
        n = len(rates)
        mean = sum(rates) / n
        if n > 1:
            var = sum((x - mean) ** 2 for x in rates) / (n - 1)
            stderr = math.sqrt(var / n)
        else:
            stderr = 0.0
        out.append(
            SummaryRow(
                mode=mode,
                sweep_axis=rows[0].sweep_axis,
                sweep_value=value,
                mean=mean,
                stderr=stderr,
                n_trials=n,
            )
        )
    return out


def summarize(results_path, out_path):
    """Aggregate a results CSV into per-(mode, sweep point) means and write it."""
    rows = read_results(results_path)
    summary = summarize_rows(rows)
    body = SUMMARY_HEADER + "\n" + "".join(r.to_csv() + "\n" for r in summary)
    _atomic_write(body, out_path)
    return summary


def read_summary(path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0] != SUMMARY_HEADER:
        raise SchemaError(f"{path}: expected header '{SUMMARY_HEADER}'")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 6:
            raise SchemaError(f"{path}:{i}: expected 6 fields, got {len(parts)}")
        try:
            rows.append(
                SummaryRow(
                    mode=parts[0],
                    sweep_axis=parts[1],
                    sweep_value=float(parts[2]),
                    mean=float(parts[3]),
                    stderr=float(parts[4]),
                    n_trials=int(parts[5]),
                )
            )
        except ValueError as exc:
            raise SchemaError(f"{path}:{i}: {exc}")
    return rows
