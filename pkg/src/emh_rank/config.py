"""Experiment configuration: defaults, JSON config files and CLI overrides.

Precedence is defaults < config file < command-line flags.
"""

from __future__ import annotations

import argparse
import json
import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .baselines import DEFAULT_CDC_ALPHA, DEFAULT_GRAVITY_RADIUS, KsdParams
from .emh import EmhParams
from .errors import ParameterError, UsageError
from .file_utils import load_json
from .measures import DEFAULT_TABLE_MEASURES
from .metrics import (
    DEFAULT_DELTA,
    DEFAULT_STEPS,
    averaging_grid,
    default_plot_grid,
    plot_grid,
)
from .sir import SirConfig

logger = logging.getLogger(__name__)

DEFAULT_OUT_DIR = Path("results")


@dataclass(frozen=True)
class BetaGridSpec:
    """Infection-rate grids of an evaluation.

    Attributes:
        start: First beta of the plot grid; None derives it from the threshold
        stop: Last beta of the plot grid; None derives it from the threshold
        step: Plot grid spacing
        delta: Spacing of the averaging grid above the threshold
        steps: Number of averaging grid points
    """

    start: float | None = None
    stop: float | None = None
    step: float = 0.01
    delta: float = DEFAULT_DELTA
    steps: int = DEFAULT_STEPS

    def __post_init__(self) -> None:
        if (self.start is None) != (self.stop is None):
            raise ParameterError("beta grid start and stop must be given together")
        if self.step <= 0.0:
            raise ParameterError(f"beta grid step must be positive, got {self.step}")
        if self.delta <= 0.0:
            raise ParameterError(f"delta must be positive, got {self.delta}")
        if self.steps < 1:
            raise ParameterError(f"steps must be >= 1, got {self.steps}")
        if self.start is not None and self.stop is not None:
            plot_grid(self.start, self.stop, self.step)

    @classmethod
    def parse(cls, text: str, **kwargs: Any) -> BetaGridSpec:
        """Parse ``START:STOP:STEP``."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(
                f"invalid beta grid '{text}'",
                suggestions=["Use START:STOP:STEP, e.g. --beta-grid 0.01:0.2:0.01"],
            )
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ParameterError(f"invalid beta grid '{text}': not numbers") from None
        return cls(start=start, stop=stop, step=step, **kwargs)

    def plot_betas(self, beta_th: float) -> list[float]:
        if self.start is None or self.stop is None:
            return default_plot_grid(beta_th, self.step)
        return plot_grid(self.start, self.stop, self.step)

    def averaging_betas(self, beta_th: float) -> list[float]:
        return averaging_grid(beta_th, self.delta, self.steps)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a ``rank`` / ``evaluate`` / ``trace`` run depends on.

    ``ksd`` None means per-dataset manifest values, falling back to
    alpha=0.9, mu=0.2. The beta of ``sir`` is a placeholder replaced per grid
    point.
    """

    emh: EmhParams = field(default_factory=EmhParams)
    ksd: KsdParams | None = None
    sir: SirConfig = field(default_factory=lambda: SirConfig(beta=0.0))
    beta_grid: BetaGridSpec = field(default_factory=BetaGridSpec)
    measures: tuple[str, ...] = DEFAULT_TABLE_MEASURES
    datasets: tuple[str, ...] = ()
    out_dir: Path = DEFAULT_OUT_DIR
    cdc_alpha: float = DEFAULT_CDC_ALPHA
    gravity_radius: int = DEFAULT_GRAVITY_RADIUS
    n_jobs: int = 1
    weight_neighborhood_as_printed: bool = False
    eta_as_printed: bool = False
    manifest: Path | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.cdc_alpha < 1.0:
            raise ParameterError(f"cdc alpha must be in (0, 1), got {self.cdc_alpha}")
        if self.gravity_radius < 1:
            raise ParameterError(
                f"gravity radius must be >= 1, got {self.gravity_radius}"
            )
        if self.n_jobs == 0:
            raise ParameterError(
                "jobs must be non-zero", suggestions=["Use 1, N or -1 (all cores)"]
            )
        if not self.measures:
            raise ParameterError("at least one measure is required")

    def ksd_for(self, entry_params: KsdParams | None) -> KsdParams:
        """Explicit ksd parameters win over the dataset's own."""
        if self.ksd is not None:
            return self.ksd
        return entry_params or KsdParams()

    def to_dict(self) -> dict[str, Any]:
        return {
            "emh": self.emh.to_dict(),
            "ksd": None
            if self.ksd is None
            else {"alpha": self.ksd.alpha, "mu": self.ksd.mu},
            "sir": {
                "gamma": self.sir.gamma,
                "runs": self.sir.runs,
                "master_seed": self.sir.master_seed,
            },
            "beta_grid": {
                "start": self.beta_grid.start,
                "stop": self.beta_grid.stop,
                "step": self.beta_grid.step,
                "delta": self.beta_grid.delta,
                "steps": self.beta_grid.steps,
            },
            "measures": list(self.measures),
            "datasets": list(self.datasets),
            "out_dir": str(self.out_dir),
            "cdc_alpha": self.cdc_alpha,
            "gravity_radius": self.gravity_radius,
            "n_jobs": self.n_jobs,
            "weight_neighborhood_as_printed": self.weight_neighborhood_as_printed,
            "eta_as_printed": self.eta_as_printed,
            "manifest": None if self.manifest is None else str(self.manifest),
        }


_SECTIONS: dict[str, tuple[type, set[str]]] = {
    "emh": (EmhParams, {f.name for f in fields(EmhParams)}),
    "ksd": (KsdParams, {f.name for f in fields(KsdParams)}),
    "sir": (SirConfig, {"gamma", "runs", "master_seed"}),
    "beta_grid": (BetaGridSpec, {f.name for f in fields(BetaGridSpec)}),
}

_SCALARS = {
    "cdc_alpha",
    "gravity_radius",
    "n_jobs",
    "weight_neighborhood_as_printed",
    "eta_as_printed",
}

_LISTS = {"measures", "datasets"}


def _section(name: str, value: Any, source: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise UsageError(f"{source}: '{name}' must be an object")
    allowed = _SECTIONS[name][1]
    unknown = sorted(set(value) - allowed)
    if unknown:
        raise UsageError(
            f"{source}: unknown key(s) in '{name}': {', '.join(unknown)}",
            suggestions=[f"Valid keys: {', '.join(sorted(allowed))}"],
        )
    return value


def config_from_dict(
    data: dict[str, Any], source: str = "<config>"
) -> ExperimentConfig:
    """Build a config from parsed JSON.

    Raises:
        UsageError: On unknown keys or wrong shapes
        ParameterError: On invalid values
    """
    if not isinstance(data, dict):
        raise UsageError(f"{source}: top level must be a JSON object")

    allowed = set(_SECTIONS) | _SCALARS | _LISTS | {"out_dir", "manifest"}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise UsageError(
            f"{source}: unknown key(s): {', '.join(unknown)}",
            suggestions=[f"Valid keys: {', '.join(sorted(allowed))}"],
        )

    kwargs: dict[str, Any] = {}
    try:
        if "emh" in data:
            kwargs["emh"] = EmhParams(**_section("emh", data["emh"], source))
        if data.get("ksd") is not None:
            kwargs["ksd"] = KsdParams(**_section("ksd", data["ksd"], source))
        if "sir" in data:
            kwargs["sir"] = SirConfig(beta=0.0, **_section("sir", data["sir"], source))
        if "beta_grid" in data:
            kwargs["beta_grid"] = BetaGridSpec(
                **_section("beta_grid", data["beta_grid"], source)
            )
    except TypeError as e:
        raise UsageError(f"{source}: {e}") from e

    for key in sorted(_LISTS):
        if key in data:
            value = data[key]
            if not isinstance(value, list) or not all(
                isinstance(v, str) for v in value
            ):
                raise UsageError(f"{source}: '{key}' must be a list of strings")
            kwargs[key] = tuple(value)
    if "out_dir" in data:
        kwargs["out_dir"] = Path(data["out_dir"])
    if data.get("manifest") is not None:
        kwargs["manifest"] = Path(data["manifest"])
    for key in _SCALARS & set(data):
        kwargs[key] = data[key]

    return ExperimentConfig(**kwargs)


def load_config(path: Path) -> ExperimentConfig:
    """Load a JSON config file.

    Raises:
        UsageError: If the file is missing, not JSON or has unknown keys
    """
    if not path.is_file():
        raise UsageError(f"Config file not found: {path}")
    try:
        data = load_json(path)
    except json.JSONDecodeError as e:
        raise UsageError(
            f"Config file is not valid JSON: {path}",
            details=f"line {e.lineno}, column {e.colno}: {e.msg}",
        ) from e
    logger.debug(f"Loaded config from {path}")
    return config_from_dict(data, str(path))


def _split_measures(values: list[str]) -> tuple[str, ...]:
    names: list[str] = []
    for value in values:
        names.extend(part.strip() for part in value.split(",") if part.strip())
    return tuple(names)


def apply_overrides(
    config: ExperimentConfig, args: argparse.Namespace
) -> ExperimentConfig:
    """Apply command-line flags that were given (non-None) on top of ``config``."""

    def flag(name: str) -> Any:
        return getattr(args, name, None)

    emh_changes = {
        key: flag(attr)
        for key, attr in (
            ("alpha1", "alpha1"),
            ("alpha2", "alpha2"),
            ("s", "s"),
            ("r", "r"),
            ("s_vector_strategy", "s_vector"),
        )
        if flag(attr) is not None
    }
    sir_changes = {
        key: flag(attr)
        for key, attr in (("gamma", "gamma"), ("runs", "runs"), ("master_seed", "seed"))
        if flag(attr) is not None
    }

    grid = config.beta_grid
    grid_changes = {
        key: flag(key) for key in ("delta", "steps") if flag(key) is not None
    }
    if flag("beta_grid") is not None:
        grid = BetaGridSpec.parse(
            flag("beta_grid"),
            delta=grid_changes.get("delta", grid.delta),
            steps=grid_changes.get("steps", grid.steps),
        )
    elif grid_changes:
        grid = replace(grid, **grid_changes)

    ksd = config.ksd
    if flag("ksd_alpha") is not None or flag("ksd_mu") is not None:
        base = ksd or KsdParams()
        ksd = KsdParams(
            alpha=base.alpha if flag("ksd_alpha") is None else flag("ksd_alpha"),
            mu=base.mu if flag("ksd_mu") is None else flag("ksd_mu"),
        )

    changes: dict[str, Any] = {
        "emh": replace(config.emh, **emh_changes) if emh_changes else config.emh,
        "sir": replace(config.sir, **sir_changes) if sir_changes else config.sir,
        "beta_grid": grid,
        "ksd": ksd,
    }
    if flag("dataset"):
        changes["datasets"] = tuple(flag("dataset"))
    if flag("measures"):
        changes["measures"] = _split_measures(flag("measures"))
    for key, attr in (
        ("out_dir", "out_dir"),
        ("manifest", "manifest"),
    ):
        if flag(attr) is not None:
            changes[key] = Path(flag(attr))
    for key, attr in (
        ("cdc_alpha", "cdc_alpha"),
        ("gravity_radius", "radius"),
        ("n_jobs", "jobs"),
    ):
        if flag(attr) is not None:
            changes[key] = flag(attr)
    for key in ("weight_neighborhood_as_printed", "eta_as_printed"):
        if flag(key):
            changes[key] = True

    return replace(config, **changes)


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, then ``--config`` if given, then the other flags."""
    config_path = getattr(args, "config", None)
    base = load_config(Path(config_path)) if config_path else ExperimentConfig()
    return apply_overrides(base, args)
