"""Run-configuration parsing and validation.

Configs are YAML (plain JSON also parses). Schema:

.. code-block:: yaml

    model:                 # exactly one of "dense" / "nanopore"
      nanopore: {n_spins: 201, coupling: 1.0}
      # or
      dense:
        n_spins: 6
        coupling: 1.0              # all-equal shorthand, or
        couplings: [[...], ...]    # explicit symmetric matrix, or
        geometry:
          positions: [[x, y, z], ...]
          field_axis: [0, 0, 1]    # optional, default z
          prefactor: 1.0           # optional
    beta_grid: {start: 0.2, stop: 6.0, count: 15}   # or an explicit list
    tau_grid: [1.5707963267948966]
    tau_mode: fixed        # or max-over-grid (best tau per beta by Fisher)
    outputs: [spectrum, moments, informations, depths]   # optional subset
    format: csv            # or json
    seed: 0                # used by randomized self-tests only
    dense_cap: 14          # optional engine caps
    nanopore_cap: 300
    header_timestamp: true

Validation collects every problem it finds and reports them together.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError
from .nanopore import DEFAULT_NANOPORE_CAP, NanoporeModel
from .spincore import (DEFAULT_DENSE_CAP, Geometry, SpinSystem,
                       dipolar_couplings_from_geometry)

OUTPUT_GROUPS = ("spectrum", "moments", "informations", "depths")
TAU_MODES = ("fixed", "max-over-grid")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    model_kind: str                    # "dense" | "nanopore"
    dense_system: SpinSystem | None
    nanopore_model: NanoporeModel | None
    beta_grid: np.ndarray
    tau_grid: np.ndarray
    tau_mode: str = "fixed"
    outputs: tuple = OUTPUT_GROUPS
    output_format: str = "csv"
    seed: int = 0
    dense_cap: int = DEFAULT_DENSE_CAP
    nanopore_cap: int = DEFAULT_NANOPORE_CAP
    header_timestamp: bool = True

    @property
    def n_spins(self) -> int:
        if self.model_kind == "dense":
            return self.dense_system.n_spins
        return self.nanopore_model.n_spins


def load_config(path) -> RunConfig:
    """Parse and validate a YAML run configuration."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"could not parse {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return config_from_dict(raw, source=str(path))


def config_from_dict(raw: dict, source: str = "<dict>") -> RunConfig:
    problems: list[str] = []
    model_kind, dense_system, nanopore_model = _parse_model(
        raw.get("model"), problems)
    beta_grid = _parse_grid(raw.get("beta_grid"), "beta_grid", problems)
    tau_grid = _parse_grid(raw.get("tau_grid"), "tau_grid", problems)

    tau_mode = raw.get("tau_mode", "fixed")
    if tau_mode not in TAU_MODES:
        problems.append(f"tau_mode must be one of {TAU_MODES}, got {tau_mode!r}")

    outputs = raw.get("outputs", list(OUTPUT_GROUPS))
    if (not isinstance(outputs, list) or not outputs
            or any(o not in OUTPUT_GROUPS for o in outputs)):
        problems.append(
            f"outputs must be a non-empty subset of {OUTPUT_GROUPS}, got {outputs!r}")
        outputs = list(OUTPUT_GROUPS)

    output_format = raw.get("format", "csv")
    if output_format not in FORMATS:
        problems.append(f"format must be one of {FORMATS}, got {output_format!r}")

    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        problems.append(f"seed must be an integer, got {seed!r}")
        seed = 0

    dense_cap = _parse_cap(raw.get("dense_cap", DEFAULT_DENSE_CAP),
                           "dense_cap", problems)
    nanopore_cap = _parse_cap(raw.get("nanopore_cap", DEFAULT_NANOPORE_CAP),
                              "nanopore_cap", problems)

    header_timestamp = raw.get("header_timestamp", True)
    if not isinstance(header_timestamp, bool):
        problems.append(f"header_timestamp must be a boolean, "
                        f"got {header_timestamp!r}")
        header_timestamp = True

    known = {"model", "beta_grid", "tau_grid", "tau_mode", "outputs", "format",
             "seed", "dense_cap", "nanopore_cap", "header_timestamp"}
    for key in raw:
        if key not in known:
            problems.append(f"unknown key {key!r}")

    if problems:
        raise ConfigError(f"{source}: " + "; ".join(problems))
    return RunConfig(
        model_kind=model_kind,
        dense_system=dense_system,
        nanopore_model=nanopore_model,
        beta_grid=beta_grid,
        tau_grid=tau_grid,
        tau_mode=tau_mode,
        outputs=tuple(outputs),
        output_format=output_format,
        seed=seed,
        dense_cap=dense_cap,
        nanopore_cap=nanopore_cap,
        header_timestamp=header_timestamp,
    )


def _parse_cap(value, name, problems) -> int:
    if not isinstance(value, int) or value < 1:
        problems.append(f"{name} must be a positive integer, got {value!r}")
        return 1
    return value


def _parse_model(node, problems):
    if not isinstance(node, dict):
        problems.append("model section missing or not a mapping")
        return "dense", None, None
    variants = [k for k in ("dense", "nanopore") if k in node]
    unknown = [k for k in node if k not in ("dense", "nanopore")]
    if unknown:
        problems.append(f"unknown model variant(s) {unknown}")
    if len(variants) != 1:
        problems.append(
            f"exactly one of model.dense / model.nanopore required, "
            f"found {variants or 'neither'}")
        return "dense", None, None
    kind = variants[0]
    try:
        if kind == "nanopore":
            return kind, None, _parse_nanopore(node["nanopore"])
        return kind, _parse_dense(node["dense"]), None
    except (ValueError, TypeError, KeyError) as exc:
        problems.append(f"model.{kind}: {exc}")
        return kind, None, None


def _parse_nanopore(node) -> NanoporeModel:
    if not isinstance(node, dict):
        raise ValueError("must be a mapping with n_spins and coupling")
    n = node.get("n_spins")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n_spins must be a positive integer, got {n!r}")
    coupling = _as_float(node.get("coupling", 1.0), "coupling")
    extra = set(node) - {"n_spins", "coupling"}
    if extra:
        raise ValueError(f"unknown keys {sorted(extra)}")
    return NanoporeModel(n_spins=n, coupling=coupling)


def _parse_dense(node) -> SpinSystem:
    if not isinstance(node, dict):
        raise ValueError("must be a mapping")
    sources = [k for k in ("couplings", "coupling", "geometry") if k in node]
    if len(sources) != 1:
        raise ValueError(
            f"exactly one of couplings / coupling / geometry required, "
            f"found {sources or 'none'}")
    source = sources[0]
    if source == "geometry":
        g = node["geometry"]
        if not isinstance(g, dict) or "positions" not in g:
            raise ValueError("geometry must be a mapping with positions")
        geom = Geometry(
            positions=np.asarray(g["positions"], dtype=float),
            field_axis=np.asarray(g.get("field_axis", [0.0, 0.0, 1.0]),
                                  dtype=float),
            prefactor=_as_float(g.get("prefactor", 1.0), "prefactor"),
        )
        system = dipolar_couplings_from_geometry(geom)
        if "n_spins" in node and node["n_spins"] != system.n_spins:
            raise ValueError(
                f"n_spins={node['n_spins']} disagrees with "
                f"{system.n_spins} geometry positions")
        return system
    n = node.get("n_spins")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n_spins must be a positive integer, got {n!r}")
    if source == "coupling":
        return SpinSystem.all_equal(n, _as_float(node["coupling"], "coupling"))
    return SpinSystem(n, np.asarray(node["couplings"], dtype=float))


def _as_float(value, name) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ValueError(f"{name} must be finite, got {out}")
    return out


def _parse_grid(node, name, problems) -> np.ndarray:
    fallback = np.array([0.0])
    if node is None:
        problems.append(f"{name} is required")
        return fallback
    if isinstance(node, dict):
        missing = {"start", "stop", "count"} - set(node)
        if missing:
            problems.append(f"{name}: range form needs start/stop/count, "
                            f"missing {sorted(missing)}")
            return fallback
        try:
            start = _as_float(node["start"], f"{name}.start")
            stop = _as_float(node["stop"], f"{name}.stop")
        except ValueError as exc:
            problems.append(str(exc))
            return fallback
        count = node["count"]
        if not isinstance(count, int) or count < 1:
            problems.append(f"{name}.count must be a positive integer, "
                            f"got {count!r}")
            return fallback
        return np.linspace(start, stop, count)
    if isinstance(node, list):
        if not node:
            problems.append(f"{name} must not be empty")
            return fallback
        try:
            values = np.array([_as_float(v, name) for v in node])
        except ValueError as exc:
            problems.append(str(exc))
            return fallback
        return values
    problems.append(f"{name} must be a list or a start/stop/count mapping, "
                    f"got {type(node).__name__}")
    return fallback
