"""Configuration loading for sampler runs: key=value files, scale presets and the output directory."""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

try:
    from importlib.resources import files
except ImportError:
    # Python <3.9 fallback
    from importlib_resources import files  # type: ignore

from dotenv import load_dotenv

OUT_DIR_ENV = "INDEP_SAMPLER_OUT_DIR"
DEFAULT_OUT_DIR = "results"
SCALES = ("desk", "full")
SUBCOMMANDS = ("theory", "product", "jumplim", "sir", "bdm")


def parse_bool(value: str) -> bool:
    """Parse a config boolean (true/false, yes/no, 1/0)."""
    lowered = str(value).strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    msg = f"Invalid boolean value: '{value}'"
    raise ValueError(msg)


def parse_int_list(value: str) -> list[int]:
    """Parse a comma-separated integer list ('1,2,3'), allowing 'a-b' ranges."""
    if isinstance(value, (list, tuple)):
        return [int(item) for item in value]
    result: list[int] = []
    for raw_part in str(value).split(","):
        part = raw_part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            start, end = part.split("-", 1)
            result.extend(range(int(start), int(end) + 1))
        else:
            result.append(int(part))
    if not result:
        msg = f"Empty integer list: '{value}'"
        raise ValueError(msg)
    return result


def parse_alpha(value: str) -> Optional[float]:
    """Parse the SIR shape setting: a positive real, or 'unknown' (returned as None)."""
    if str(value).strip().lower() == "unknown":
        return None
    alpha = float(value)
    if alpha <= 0:
        msg = f"alpha must be positive or 'unknown', got {value}"
        raise ValueError(msg)
    return alpha


def parse_k_setting(value: str) -> Optional[list[int]]:
    """Parse a k setting: 'sweep' (None, meaning the default grid) or an integer list."""
    if str(value).strip().lower() in {"sweep", "auto"}:
        return None
    return parse_int_list(value)


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        msg = f"Expected a positive integer, got {value}"
        raise ValueError(msg)
    return number


def _nonnegative_int(value: str) -> int:
    number = int(value)
    if number < 0:
        msg = f"Expected a non-negative integer, got {value}"
        raise ValueError(msg)
    return number


def _positive_float(value: str) -> float:
    number = float(value)
    if not number > 0:
        msg = f"Expected a positive number, got {value}"
        raise ValueError(msg)
    return number


# Per-subcommand key schemas: key -> converter
CONFIG_SCHEMAS: dict[str, dict[str, Callable[[Any], Any]]] = {
    "theory": {
        "pair": str,
        "n": _positive_int,
        "mc_samples": _positive_int,
        "curve_points": _positive_int,
    },
    "product": {
        "pair": str,
        "n": _positive_int,
        "k_grid": parse_k_setting,
        "grid_points": _positive_int,
        "iterations": _positive_int,
        "burn_in": _nonnegative_int,
        "replicates": _positive_int,
        "compare_rwm": parse_bool,
    },
    "jumplim": {
        "pair": str,
        "n": _positive_int,
        "k": _positive_int,
        "horizon": _positive_float,
        "hstar_samples": _positive_int,
        "ns": parse_int_list,
    },
    "sir": {
        "data": str,
        "population": _positive_int,
        "alpha": parse_alpha,
        "k": parse_k_setting,
        "grid_points": _positive_int,
        "iterations": _positive_int,
        "burn_in": _nonnegative_int,
        "simulate": parse_bool,
    },
    "bdm": {
        "data": str,
        "ntarget": _positive_int,
        "nlatent": _positive_int,
        "k": parse_k_setting,
        "k_grid": parse_int_list,
        "iterations": _positive_int,
        "burn_in": _nonnegative_int,
        "nrep": _positive_int,
        "sample_size": _positive_int,
    },
}

# Keys shared by every subcommand; handled by RunConfig fields
COMMON_KEYS = {"seed": int, "out_dir": str, "scale": str, "threads": _positive_int}


@dataclass
class RunConfig:
    """Resolved configuration for one CLI run."""

    subcommand: str
    values: dict[str, Any] = field(default_factory=dict)
    seed: int = 20240101
    out_dir: str = DEFAULT_OUT_DIR
    scale: str = "desk"
    threads: int = 1

    def __post_init__(self):
        """Validate subcommand, scale and seed range."""
        if self.subcommand not in SUBCOMMANDS:
            msg = f"Unknown subcommand: '{self.subcommand}' (expected one of {', '.join(SUBCOMMANDS)})"
            raise ValueError(msg)
        if self.scale not in SCALES:
            msg = f"Unknown scale: '{self.scale}' (expected desk or full)"
            raise ValueError(msg)
        if not 0 <= self.seed < 2**64:
            msg = f"Seed must be a 64-bit unsigned integer, got {self.seed}"
            raise ValueError(msg)

    def get(self, key: str, default: Any = None) -> Any:
        """Look up a subcommand value."""
        return self.values.get(key, default)

    def to_dict(self) -> dict[str, Any]:
        """JSON-friendly view for the run manifest."""
        return {
            "subcommand": self.subcommand,
            "seed": self.seed,
            "out_dir": self.out_dir,
            "scale": self.scale,
            "threads": self.threads,
            "values": dict(self.values),
        }


def get_default_config_path(filename: str) -> str:
    """
    Get a bundled data file path from package data.

    Args:
        filename: Name of the data file (e.g., 'scale_presets.json')

    Returns:
        Absolute path to the file in the package data directory
    """
    return str(files("indep_sampler").joinpath(f"data/{filename}"))


def load_env(env_file: Optional[str] = None) -> str:
    """
    Load the default output directory from the environment.

    Environment variable loading precedence:
    1. If env_file provided via CLI, load from that path
    2. Otherwise, check for .env in current working directory
    3. Otherwise, use system environment variables

    Args:
        env_file: Optional path to .env file (CLI parameter)

    Returns:
        Output directory from INDEP_SAMPLER_OUT_DIR, or 'results'

    Raises:
        FileNotFoundError: If an explicit env_file does not exist
    """
    if env_file:
        if not Path(env_file).exists():
            msg = f"Environment file not found: {env_file}"
            raise FileNotFoundError(msg)
        load_dotenv(env_file)
    elif Path(".env").exists():
        load_dotenv(".env")

    return os.getenv(OUT_DIR_ENV) or DEFAULT_OUT_DIR


def load_scale_presets(scale: str, subcommand: str, path: Optional[str] = None) -> dict[str, Any]:
    """
    Load the preset values for one scale and subcommand from scale_presets.json.

    Args:
        scale: 'desk' or 'full'
        subcommand: Subcommand name
        path: Optional presets file; defaults to the bundled data/scale_presets.json

    Returns:
        Dict of preset values (copies, safe to mutate)

    Raises:
        FileNotFoundError: If the presets file doesn't exist
        ValueError: If the scale or subcommand is missing
    """
    if path is None:
        path = get_default_config_path("scale_presets.json")

    presets_path = Path(path)
    if not presets_path.exists():
        msg = f"Scale presets file not found: {path}"
        raise FileNotFoundError(msg)

    with presets_path.open(encoding="utf-8") as f:
        presets = json.load(f)

    if not isinstance(presets, dict):
        msg = "Invalid scale_presets.json: must be a dictionary"
        raise TypeError(msg)
    if scale not in presets:
        msg = f"Invalid scale_presets.json: missing scale '{scale}'"
        raise ValueError(msg)
    if subcommand not in presets[scale]:
        msg = f"Invalid scale_presets.json: scale '{scale}' has no '{subcommand}' section"
        raise ValueError(msg)
    return dict(presets[scale][subcommand])


def parse_config_file(path: str) -> dict[str, str]:
    """
    Read a flat ``key = value`` file; '#' starts a comment, blank lines are ignored.

    Raises:
        FileNotFoundError: If the file doesn't exist
        ValueError: On a line without '=' or a repeated key (with line number)
    """
    config_path = Path(path)
    if not config_path.exists():
        msg = f"Config file not found: {path}"
        raise FileNotFoundError(msg)

    raw: dict[str, str] = {}
    with config_path.open(encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            content = line.split("#", 1)[0].strip()
            if not content:
                continue
            if "=" not in content:
                msg = f"{path}:{line_number}: expected 'key = value', got '{content}'"
                raise ValueError(msg)
            key, value = (part.strip() for part in content.split("=", 1))
            if not key:
                msg = f"{path}:{line_number}: empty key"
                raise ValueError(msg)
            if key in raw:
                msg = f"{path}:{line_number}: duplicate key '{key}'"
                raise ValueError(msg)
            raw[key] = value
    return raw


def convert_values(subcommand: str, raw: dict[str, Any]) -> dict[str, Any]:
    """
    Validate keys against the subcommand schema and convert values.

    Raises:
        ValueError: On an unknown key or an unconvertible value
    """
    schema = CONFIG_SCHEMAS[subcommand]
    converted: dict[str, Any] = {}
    for key, value in raw.items():
        if key not in schema:
            msg = f"Unknown config key '{key}' for '{subcommand}' (allowed: {', '.join(sorted(schema))})"
            raise ValueError(msg)
        if value is None:
            continue
        try:
            converted[key] = schema[key](value)
        except (TypeError, ValueError) as e:
            msg = f"Invalid value for '{key}': {value} ({e})"
            raise ValueError(msg) from e
    return converted


def build_run_config(
    subcommand: str,
    overrides: dict[str, Any],
    config_file: Optional[str] = None,
    env_file: Optional[str] = None,
) -> RunConfig:
    """
    Resolve a RunConfig: scale presets, then the config file, then command-line overrides.

    Args:
        subcommand: Subcommand name
        overrides: Flag values (None entries are ignored); may include seed, out_dir, scale, threads
        config_file: Optional ``key = value`` file
        env_file: Optional .env path for the default output directory

    Returns:
        The resolved RunConfig
    """
    file_values = parse_config_file(config_file) if config_file else {}
    common = {key: file_values.pop(key) for key in list(file_values) if key in COMMON_KEYS}
    common.update({key: value for key, value in overrides.items() if key in COMMON_KEYS and value is not None})
    flag_values = {key: value for key, value in overrides.items() if key not in COMMON_KEYS and value is not None}

    scale = str(common.get("scale", "desk"))
    if scale not in SCALES:
        msg = f"Unknown scale: '{scale}' (expected desk or full)"
        raise ValueError(msg)

    values = {key: value for key, value in load_scale_presets(scale, subcommand).items() if key in CONFIG_SCHEMAS[subcommand]}
    values.update(convert_values(subcommand, file_values))
    values.update(convert_values(subcommand, flag_values))

    out_dir = common.get("out_dir") or load_env(env_file)
    return RunConfig(
        subcommand=subcommand,
        values=values,
        seed=int(common.get("seed", RunConfig.seed)),
        out_dir=str(out_dir),
        scale=scale,
        threads=_positive_int(common.get("threads", 1)),
    )
