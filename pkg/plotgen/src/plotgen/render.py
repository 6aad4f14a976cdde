"""Render one trend figure (rate vs. power, element count, or user offset).

Input is the sweep summary CSV produced by the simulation harness:

    mode,sweep_axis,sweep_value,mean_secrecy_rate_bps_hz,stderr_secrecy_rate_bps_hz,n_trials

One curve is drawn per mode, with error bars from the standard-error
column.  Styling is fully pinned (figure size, dpi, per-mode colors and
markers, font sizes), so re-rendering the same input with the same library
versions reproduces the output byte for byte.
"""

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

SUMMARY_HEADER = "mode,sweep_axis,sweep_value,mean_secrecy_rate_bps_hz,stderr_secrecy_rate_bps_hz,n_trials"

KINDS = {
    "power": ("pmax_dbm", "Transmit power budget (dBm)"),
    "elements": ("m_elements", "Reflecting elements (count)"),
    "bob_y": ("bob_y", "Bob y-coordinate (m)"),
}

# fixed mode order and styling so output bytes are reproducible
MODE_STYLE = {
    "UavIrs": ("#1f77b4", "o"),
    "UavNoIrs": ("#2ca02c", "s"),
    "BsIrs": ("#d62728", "^"),
    "BsNoIrs": ("#7f7f7f", "v"),
}
FALLBACK_STYLE = ("#9467bd", "d")


class SchemaError(ValueError):
    """The summary file does not match the expected schema."""


class MissingAxisError(ValueError):
    """The summary holds no rows for the requested sweep axis."""


@dataclass(frozen=True)
class SummaryRow:
    mode: str
    sweep_axis: str
    sweep_value: float
    mean: float
    stderr: float
    n_trials: int


def read_summary(path):
    """Parse the harness summary CSV; raises SchemaError on any mismatch."""
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
            raise SchemaError(f"{path}:{i}: {exc}") from exc
    return rows


def render(summary_path, kind, out_path):
    """Draw the requested trend figure and write it to ``out_path``.

    Returns the list of modes plotted (one curve each).  Raises
    MissingAxisError when the summary's sweep axis does not match ``kind``
    or no rows remain.
    """
    if kind not in KINDS:
        raise MissingAxisError(f"unknown figure kind '{kind}' (choose from {sorted(KINDS)})")
    axis, x_label = KINDS[kind]
    rows = [r for r in read_summary(summary_path) if r.sweep_axis == axis]
    if not rows:
        raise MissingAxisError(f"{summary_path}: no rows with sweep axis '{axis}'")

    modes = sorted({r.mode for r in rows}, key=lambda m: (list(MODE_STYLE).index(m) if m in MODE_STYLE else 99, m))
    fig, ax = plt.subplots(figsize=(6.0, 4.2), dpi=150)
    for mode in modes:
        picked = sorted((r for r in rows if r.mode == mode), key=lambda r: r.sweep_value)
        xs = [r.sweep_value for r in picked]
        ys = [r.mean for r in picked]
        errs = [r.stderr for r in picked]
        color, marker = MODE_STYLE.get(mode, FALLBACK_STYLE)
        linestyle = "-" if len(xs) > 1 else "none"
        ax.errorbar(
            xs, ys, yerr=errs, label=mode, color=color, marker=marker,
            linestyle=linestyle, capsize=3.0, markersize=5.0, linewidth=1.5,
        )
    ax.set_xlabel(x_label)
    ax.set_ylabel("Secrecy rate (bits/s/Hz)")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, format="png")
    plt.close(fig)
    return modes
