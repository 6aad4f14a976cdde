"""Sweep configuration: YAML schema, validation, mode semantics, presets.

All dB-valued fields carry a ``_db`` or ``_dbm`` suffix and are converted
to linear scale exactly once, here; everything downstream works in watts
and linear gains.
"""

from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from ..ao import AoConfig
from ..channel import LINKS, NodeLayout, RadioParams, rician_slope
from ..exceptions import ConfigError
from ..scenario import Scenario

MODES = ("UavIrs", "UavNoIrs", "BsIrs", "BsNoIrs")
SWEEP_AXES = ("pmax_dbm", "m_elements", "bob_y")


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def dbm_to_watt(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class SweepSpec:
    """Validated sweep configuration (geometry still in config units)."""

    scenario_id: str
    uav_height: float
    irs_height: float
    irs_xy: tuple
    bob_xy: tuple
    eve_xy: tuple
    bs_position: tuple
    beta0_db: float
    pathloss_exponents: dict
    rician_k_min_db: float
    rician_k_max_db: float
    noise_bob_dbm: float
    noise_eve_dbm: float
    n_antennas: int
    n_elements: int
    pmax_dbm: float
    rmin_bps_hz: float
    max_iters: int
    tol_bps_hz: float
    search_box: tuple
    modes: tuple
    trials: int
    base_seed: int
    sweep_axis: str
    sweep_values: tuple

    def with_overrides(self, trials=None, base_seed=None):
        out = self
        if trials is not None:
            out = replace(out, trials=trials)
        if base_seed is not None:
            out = replace(out, base_seed=base_seed)
        return out


class _Reader:
    """Nested-dict reader that reports the full field path on error."""

    def __init__(self, data, source):
        self.data = data
        self.source = source

    def get(self, path, kind=None, default=None, required=True):
        node = self.data
        for part in path.split("."):
            if not isinstance(node, dict) or part not in node:
                if required and default is None:
                    raise ConfigError(f"{self.source}: missing field '{path}'")
                return default
            node = node[part]
        if kind is not None:
            try:
                if kind is int and isinstance(node, float) and node != int(node):
                    raise ValueError("not an integer")
                node = kind(node)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{self.source}: field '{path}' is not {kind.__name__}: {exc}")
        return node


def _pair(reader, path):
    raw = reader.get(path)
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ConfigError(f"{reader.source}: field '{path}' must be a [x, y] pair")
    return tuple(float(v) for v in raw)


def parse_config(data, source="<config>"):
    """Validate a parsed YAML mapping into a SweepSpec."""
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    r = _Reader(data, source)

    exponents_raw = r.get("radio.pathloss_exponents")
    if not isinstance(exponents_raw, dict):
        raise ConfigError(f"{source}: radio.pathloss_exponents must be a mapping")
    missing = [k for k in LINKS if k not in exponents_raw]
    if missing:
        raise ConfigError(f"{source}: radio.pathloss_exponents missing {missing}")
    exponents = {k: float(exponents_raw[k]) for k in LINKS}

    modes = r.get("run.modes")
    if not isinstance(modes, (list, tuple)) or not modes:
        raise ConfigError(f"{source}: run.modes must be a non-empty list")
    for mode in modes:
        if mode not in MODES:
            raise ConfigError(f"{source}: unknown mode '{mode}' (choose from {MODES})")

    axis = r.get("sweep.axis", str)
    if axis not in SWEEP_AXES:
        raise ConfigError(f"{source}: sweep.axis '{axis}' not one of {SWEEP_AXES}")
    values = r.get("sweep.values")
    if not isinstance(values, (list, tuple)) or not values:
        raise ConfigError(f"{source}: sweep.values must be a non-empty list")
    if axis == "m_elements":
        values = tuple(int(v) for v in values)
        if any(v < 1 for v in values):
            raise ConfigError(f"{source}: sweep.values for m_elements must be >= 1")
    else:
        values = tuple(float(v) for v in values)

    box_raw = r.get("solver.search_box", default=[[-100.0, 100.0], [-100.0, 100.0]], required=False)
    box = np.asarray(box_raw, dtype=float)
    if box.shape != (2, 2) or np.any(box[:, 0] >= box[:, 1]):
        raise ConfigError(f"{source}: solver.search_box must be [[xmin,xmax],[ymin,ymax]]")

    bs_raw = r.get("geometry.bs_position", default=[45.0, 5.0, 20.0], required=False)
    if not isinstance(bs_raw, (list, tuple)) or len(bs_raw) != 3:
        raise ConfigError(f"{source}: geometry.bs_position must be [x, y, height]")

    trials = r.get("run.trials", int)
    if trials < 1:
        raise ConfigError(f"{source}: run.trials must be >= 1")

    spec = SweepSpec(
        scenario_id=str(r.get("scenario_id")),
        uav_height=r.get("geometry.uav_height_m", float),
        irs_height=r.get("geometry.irs_height_m", float),
        irs_xy=_pair(r, "geometry.irs_xy"),
        bob_xy=_pair(r, "geometry.bob_xy"),
        eve_xy=_pair(r, "geometry.eve_xy"),
        bs_position=tuple(float(v) for v in bs_raw),
        beta0_db=r.get("radio.beta0_db", float),
        pathloss_exponents=exponents,
        rician_k_min_db=r.get("radio.rician_k_min_db", float),
        rician_k_max_db=r.get("radio.rician_k_max_db", float),
        noise_bob_dbm=r.get("radio.noise_bob_dbm", float),
        noise_eve_dbm=r.get("radio.noise_eve_dbm", float),
        n_antennas=r.get("radio.n_antennas", int),
        n_elements=r.get("radio.n_elements", int),
        pmax_dbm=r.get("budget.pmax_dbm", float),
        rmin_bps_hz=r.get("budget.rmin_bps_hz", float),
        max_iters=r.get("solver.max_iters", int, default=50, required=False),
        tol_bps_hz=r.get("solver.tol_bps_hz", float, default=1e-4, required=False),
        search_box=tuple(map(tuple, box.tolist())),
        modes=tuple(modes),
        trials=trials,
        base_seed=r.get("run.base_seed", int),
        sweep_axis=axis,
        sweep_values=values,
    )
    if spec.uav_height <= spec.irs_height or spec.irs_height <= 0:
        raise ConfigError(f"{source}: need uav_height_m > irs_height_m > 0")
    return spec


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}")
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: YAML parse error: {exc}")
    return parse_config(data, source=str(path))


def radio_for(spec, n_elements=None):
    k_min = db_to_linear(spec.rician_k_min_db)
    k_max = db_to_linear(spec.rician_k_max_db)
    return RadioParams(
        beta0=db_to_linear(spec.beta0_db),
        pathloss_exponents=dict(spec.pathloss_exponents),
        rician_a1=k_min,
        rician_a2=rician_slope(k_min, k_max),
        noise_bob=dbm_to_watt(spec.noise_bob_dbm),
        noise_eve=dbm_to_watt(spec.noise_eve_dbm),
        n_antennas=spec.n_antennas,
        n_elements=spec.n_elements if n_elements is None else int(n_elements),
    )


def scenario_for(spec, mode, sweep_value):
    """Materialize (Scenario, AoConfig) for one mode at one sweep point.

    Mode semantics: ``Bs*`` pins the transmitter at the base-station
    position and disables the placement step; ``*NoIrs`` zeroes the surface
    legs and disables the reflection step.
    """
    if mode not in MODES:
        raise ConfigError(f"unknown mode '{mode}'")
    n_elements = None
    pmax_dbm = spec.pmax_dbm
    bob_xy = spec.bob_xy
    if spec.sweep_axis == "m_elements":
        n_elements = int(sweep_value)
    elif spec.sweep_axis == "pmax_dbm":
        pmax_dbm = float(sweep_value)
    elif spec.sweep_axis == "bob_y":
        bob_xy = (spec.bob_xy[0], float(sweep_value))

    aerial = mode.startswith("Uav")
    irs_enabled = mode.endswith("Irs") and not mode.endswith("NoIrs")
    if aerial:
        uav_xy = 0.5 * (np.asarray(bob_xy) + np.asarray(spec.irs_xy))
        uav_height = spec.uav_height
    else:
        uav_xy = np.asarray(spec.bs_position[:2])
        uav_height = spec.bs_position[2]

    layout = NodeLayout(
        uav_xy=uav_xy,
        bob_xy=np.asarray(bob_xy),
        eve_xy=np.asarray(spec.eve_xy),
        irs_xy=np.asarray(spec.irs_xy),
        uav_height=uav_height,
        irs_height=spec.irs_height,
    )
    scenario = Scenario(
        layout=layout,
        radio=radio_for(spec, n_elements=n_elements),
        p_max=dbm_to_watt(pmax_dbm),
        r_min=spec.rmin_bps_hz,
        search_box=spec.search_box,
        irs_enabled=irs_enabled,
    )
    cfg = AoConfig(
        max_iters=spec.max_iters,
        tol=spec.tol_bps_hz,
        enable_power=True,
        enable_reflection=irs_enabled,
        enable_deployment=aerial,
    )
    return scenario, cfg


def _base_config(scenario_id):
    return {
        "scenario_id": scenario_id,
        "geometry": {
            "uav_height_m": 50.0,
            "irs_height_m": 5.0,
            "irs_xy": [3.0, 5.0],
            "bob_xy": [0.0, 0.0],
            "eve_xy": [0.0, 10.0],
            "bs_position": [45.0, 5.0, 20.0],
        },
        "radio": {
            "beta0_db": -30.0,
            "pathloss_exponents": {
                "uav_bob": 3.5,
                "uav_eve": 3.5,
                "uav_irs": 2.2,
                "irs_bob": 2.8,
                "irs_eve": 2.8,
            },
            "rician_k_min_db": 0.0,
            "rician_k_max_db": 30.0,
            "noise_bob_dbm": -55.0,
            "noise_eve_dbm": -55.0,
            "n_antennas": 4,
            "n_elements": 60,
        },
        "budget": {"pmax_dbm": 50.0, "rmin_bps_hz": 1.0},
        "solver": {
            "max_iters": 50,
            "tol_bps_hz": 1.0e-4,
            "search_box": [[-100.0, 100.0], [-100.0, 100.0]],
        },
        "run": {
            "modes": list(MODES),
            "trials": 50,
            "base_seed": 20260809,
        },
    }


def preset_configs():
    """The three standard sweep presets, as YAML-ready mappings."""
    power = _base_config("sweep_power")
    power["sweep"] = {"axis": "pmax_dbm", "values": [30.0, 35.0, 40.0, 45.0, 50.0]}

    elements = _base_config("sweep_elements")
    elements["sweep"] = {"axis": "m_elements", "values": [10, 20, 30, 40, 50, 60]}

    bob_y = _base_config("sweep_bob_y")
    bob_y["sweep"] = {"axis": "bob_y", "values": [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]}

    return {"sweep_power": power, "sweep_elements": elements, "sweep_bob_y": bob_y}


def dump_config(config):
    return yaml.safe_dump(config, sort_keys=False)
