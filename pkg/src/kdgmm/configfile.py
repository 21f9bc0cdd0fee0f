"""Sweep configuration files: flat TOML, env overrides, resolved sidecars.

Precedence: file < environment < command line. Environment keys use the
prefix KDGMM_, with double underscores for sections (KDGMM_N_DIM=500,
KDGMM_BASE__RHO=0.3, KDGMM_AXES__ALPHA="[1,2,3]"); values are parsed as
TOML literals. The fully resolved configuration is echoed to a sidecar
file next to every emitted CSV so each table is reproducible from its
sidecar alone.
"""
from __future__ import annotations

import os

try:
    import tomllib  # py >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .params import PARAM_FIELDS, ModelParams
from .solver import SolverConfig
from .sweep import SweepSpec

ENV_PREFIX = "KDGMM_"

_TOP_KEYS = {
    "out", "modes", "n_seeds", "n_dim", "seed", "n_test",
    "train_tol", "train_max_iter", "teacher_kind", "bo_variant",
}
_SECTIONS = ("base", "axes", "solver")


def _parse_value(text: str):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def load_config(path) -> dict:
    with open(path, "rb") as fh:
        cfg = tomllib.load(fh)
    _validate_keys(cfg, source=str(path))
    return cfg


def _validate_keys(cfg: dict, source: str) -> None:
    for key in cfg:
        if key not in _TOP_KEYS and key not in _SECTIONS:
            raise ValueError(f"unknown config key {key!r} in {source}")


def set_key(cfg: dict, dotted: str, value) -> None:
    parts = dotted.split(".")
    if len(parts) == 1:
        if parts[0] not in _TOP_KEYS:
            raise ValueError(f"unknown config key {dotted!r}")
        cfg[parts[0]] = value
    elif len(parts) == 2 and parts[0] in _SECTIONS:
        cfg.setdefault(parts[0], {})[parts[1]] = value
    else:
        raise ValueError(f"unknown config key {dotted!r}")


def apply_env_overrides(cfg: dict, environ=None) -> dict:
    environ = os.environ if environ is None else environ
    for name, raw in sorted(environ.items()):
        if not name.startswith(ENV_PREFIX):
            continue
        dotted = name[len(ENV_PREFIX):].lower().replace("__", ".")
        set_key(cfg, dotted, _parse_value(raw))
    return cfg


def apply_set_overrides(cfg: dict, assignments) -> dict:
    for assignment in assignments or ():
        if "=" not in assignment:
            raise ValueError(f"--set expects key=value, got {assignment!r}")
        dotted, _, raw = assignment.partition("=")
        set_key(cfg, dotted.strip(), _parse_value(raw.strip()))
    return cfg


def build_spec(cfg: dict) -> SweepSpec:
    base_cfg = cfg.get("base", {})
    unknown = set(base_cfg) - set(PARAM_FIELDS)
    if unknown:
        raise ValueError(f"unknown base parameters: {sorted(unknown)}")
    base = ModelParams(**base_cfg)
    axes = tuple(
        (name, tuple(sorted(float(v) for v in grid)))
        for name, grid in cfg.get("axes", {}).items()
    )
    return SweepSpec(
        base=base,
        axes=axes,
        solver=SolverConfig(**cfg.get("solver", {})),
        modes=tuple(cfg.get("modes", ("replica-teacher",))),
        n_seeds=int(cfg.get("n_seeds", 10)),
        n_dim=int(cfg.get("n_dim", 1000)),
        seed=int(cfg.get("seed", 0)),
        n_test=int(cfg.get("n_test", 100000)),
        train_tol=float(cfg.get("train_tol", 1e-6)),
        train_max_iter=int(cfg.get("train_max_iter", 2000)),
        teacher_kind=cfg.get("teacher_kind", "erm"),
        bo_variant=cfg.get("bo_variant", "plus"),
        out=cfg.get("out"),
    )


def _toml_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_scalar(v) for v in value) + "]"
    return str(value)


def dump_resolved(spec: SweepSpec, path) -> None:
    """Write the fully resolved sweep configuration as flat TOML."""
    lines = []
    if spec.out is not None:
        lines.append(f"out = {_toml_scalar(spec.out)}")
    lines.append(f"modes = {_toml_scalar(list(spec.modes))}")
    for key in ("n_seeds", "n_dim", "seed", "n_test", "train_tol",
                "train_max_iter", "teacher_kind", "bo_variant"):
        lines.append(f"{key} = {_toml_scalar(getattr(spec, key))}")
    lines.append("")
    lines.append("[base]")
    for name in PARAM_FIELDS:
        lines.append(f"{name} = {_toml_scalar(getattr(spec.base, name))}")
    if spec.axes:
        lines.append("")
        lines.append("[axes]")
        for name, grid in spec.axes:
            lines.append(f"{name} = {_toml_scalar(list(grid))}")
    lines.append("")
    lines.append("[solver]")
    for name in ("damping", "tol", "max_iters", "quad_order"):
        lines.append(f"{name} = {_toml_scalar(getattr(spec.solver, name))}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
