"""JSON run configuration: parsing, validation and materialization."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .dubins import ProblemParams
from .mpc import MpcConfig
from .scp import ScpConfig


class ConfigError(ValueError):
    """Invalid run configuration; the message starts with the offending field path."""


@dataclass(frozen=True)
class ShootingSettings:
    steps: int = 400
    tol: float = 1e-6
    max_iters: int = 50

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError("steps must be a positive integer")
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise ValueError("tol must be a positive finite number")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")


@dataclass(frozen=True)
class RunConfig:
    problem: ProblemParams
    n_el: int = 19
    quad_points: int = 4
    scp: ScpConfig = field(default_factory=ScpConfig)
    shooting: ShootingSettings = field(default_factory=ShootingSettings)
    mpc: MpcConfig = field(default_factory=MpcConfig)
    mpc_noise: bool = True
    dense_samples: int = 1000
    output_dir: Path = Path("out")
    seed: int = 0

    def to_dict(self) -> dict:
        """Fully materialized configuration in the on-disk schema."""
        p = self.problem
        mpc = {
            "dt": self.mpc.dt,
            "control_steps": self.mpc.control_steps,
            "horizon": self.mpc.horizon,
            "P_H": self.mpc.P_H.tolist(),
            "Q": self.mpc.Q.tolist(),
            "R": self.mpc.R.tolist(),
            "noise_scale": self.mpc.noise_scale,
            "noise": self.mpc_noise,
        }
        return {
            "problem": {"X0": list(p.X0), "XT": list(p.XT), "mu_T": p.mu_T, "mu_v": p.mu_v,
                        "mu_w": p.mu_w, "eta": p.eta},
            "discretization": {"n_el": self.n_el, "quad_points": self.quad_points},
            "scp": asdict(self.scp),
            "shooting": asdict(self.shooting),
            "mpc": mpc,
            "dense_samples": self.dense_samples,
            "output_dir": str(self.output_dir),
            "seed": self.seed,
        }


_SECTIONS = {
    "problem": {"X0", "XT", "mu_T", "mu_v", "mu_w", "eta"},
    "discretization": {"n_el", "quad_points"},
    "scp": {f.name for f in fields(ScpConfig)},
    "shooting": {f.name for f in fields(ShootingSettings)},
    "mpc": {"dt", "control_steps", "horizon", "P_H", "Q", "R", "noise_scale", "noise"},
}
_TOP = set(_SECTIONS) | {"dense_samples", "output_dir", "seed"}


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return value


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _triple(value, where: str) -> tuple:
    if not isinstance(value, list) or len(value) != 3:
        raise ConfigError(f"{where}: expected a list [x, y, theta]")
    return tuple(float(_number(v, f"{where}[{i}]")) for i, v in enumerate(value))


def _matrix(value, n: int, where: str):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value) * np.eye(n)
    if (not isinstance(value, list) or len(value) != n
            or any(not isinstance(row, list) or len(row) != n for row in value)):
        raise ConfigError(f"{where}: expected a scalar or a {n}x{n} nested list")
    return np.array([[_number(x, where) for x in row] for row in value], dtype=float)


def _section(raw: dict, name: str) -> dict:
    sec = raw.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"{name}: expected an object")
    unknown = sorted(set(sec) - _SECTIONS[name])
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}: unknown key")
    return sec


def _build(ctor, section: str, kwargs: dict):
    try:
        return ctor(**kwargs)
    except ValueError as exc:
        msg = str(exc)
        # constructors name the offending field first; prefix the section path
        head = msg.split()[0] if msg else ""
        if head in kwargs:
            raise ConfigError(f"{section}.{msg}") from None
        raise ConfigError(f"{section}: {msg}") from None


def config_from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config: expected a JSON object")
    unknown = sorted(set(raw) - _TOP)
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown key")

    prob = _section(raw, "problem")
    for key in ("X0", "XT"):
        if key not in prob:
            raise ConfigError(f"problem.{key}: required")
    pkw = {"X0": _triple(prob["X0"], "problem.X0"), "XT": _triple(prob["XT"], "problem.XT")}
    for key in ("mu_T", "mu_v", "mu_w"):
        if key in prob:
            pkw[key] = float(_number(prob[key], f"problem.{key}"))
    if "eta" in prob:
        pkw["eta"] = _integer(prob["eta"], "problem.eta")
    problem = _build(ProblemParams, "problem", pkw)

    disc = _section(raw, "discretization")
    n_el = _integer(disc.get("n_el", 19), "discretization.n_el")
    quad_points = _integer(disc.get("quad_points", 4), "discretization.quad_points")
    if n_el < 1:
        raise ConfigError("discretization.n_el: must be >= 1")
    if quad_points < 2:
        raise ConfigError("discretization.quad_points: must be >= 2")

    scp_raw = _section(raw, "scp")
    skw = {}
    for key, value in scp_raw.items():
        skw[key] = _integer(value, f"scp.{key}") if key == "max_iters" else float(_number(value, f"scp.{key}"))
    scp = _build(ScpConfig, "scp", skw)

    sh_raw = _section(raw, "shooting")
    shkw = {}
    for key, value in sh_raw.items():
        shkw[key] = float(_number(value, f"shooting.{key}")) if key == "tol" else _integer(value, f"shooting.{key}")
    shooting = _build(ShootingSettings, "shooting", shkw)

    seed = _integer(raw.get("seed", 0), "seed")
    if seed < 0:
        raise ConfigError("seed: must be non-negative")

    mpc_raw = _section(raw, "mpc")
    mkw = {"seed": seed}
    if mpc_raw.get("dt") is not None:
        mkw["dt"] = float(_number(mpc_raw["dt"], "mpc.dt"))
    for key in ("control_steps", "horizon"):
        if key in mpc_raw:
            mkw[key] = _integer(mpc_raw[key], f"mpc.{key}")
    if "noise_scale" in mpc_raw:
        mkw["noise_scale"] = float(_number(mpc_raw["noise_scale"], "mpc.noise_scale"))
    for key, n in (("P_H", 3), ("Q", 3), ("R", 2)):
        if key in mpc_raw:
            mkw[key] = _matrix(mpc_raw[key], n, f"mpc.{key}")
    mpc = _build(MpcConfig, "mpc", mkw)
    noise = mpc_raw.get("noise", True)
    if not isinstance(noise, bool):
        raise ConfigError("mpc.noise: expected true or false")

    dense = _integer(raw.get("dense_samples", 1000), "dense_samples")
    if dense < 0 or dense == 1:
        raise ConfigError("dense_samples: must be 0 (disabled) or >= 2")
    out = raw.get("output_dir", "out")
    if not isinstance(out, str) or not out:
        raise ConfigError("output_dir: expected a non-empty string")

    return RunConfig(problem=problem, n_el=n_el, quad_points=quad_points, scp=scp, shooting=shooting,
                     mpc=mpc, mpc_noise=noise, dense_samples=dense, output_dir=Path(out), seed=seed)


def load_config(path) -> RunConfig:
    """Read and validate a JSON config. I/O problems raise ``OSError``."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON ({exc})") from None
    return config_from_dict(raw)
