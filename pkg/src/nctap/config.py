"""Loading run configurations (one JSON document per run)."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .adversary import TapSchedule
from .codes import ParityCheck, gabidulin_parity_check, parity_check
from .errors import ConfigError, NctapError
from .gf import FieldElement, FieldSpec, field_build, find_primitive_poly
from .netsim import Link, Network

DEFAULT_CONFIG = {
    "field": {"p": 2, "m": 2, "poly": [1, 1, 1]},
    "code": {"construction": "gabidulin", "n": 2, "k": 1},
}


def schema() -> dict:
    return json.loads(resources.files("nctap").joinpath("config_schema.json").read_text())


def load_json_arg(text: str):
    """A JSON literal, or ``@path`` to read one from a file."""
    try:
        if text.startswith("@"):
            return json.loads(Path(text[1:]).read_text())
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read JSON from {text[:40]!r}: {exc}") from None


def validate(cfg: dict) -> dict:
    try:
        jsonschema.validate(cfg, schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise ConfigError(f"config error at {path}: {exc.message}") from None
    return cfg


def build_field(cfg: dict) -> FieldSpec:
    poly = cfg.get("poly")
    try:
        if poly is None:
            poly = find_primitive_poly(cfg["p"], cfg["m"])
        return field_build(cfg["p"], cfg["m"], poly)
    except NctapError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def element(field: FieldSpec, coords) -> FieldElement:
    if len(coords) != field.m:
        raise ConfigError(f"element {coords} needs {field.m} coordinates")
    if any(c >= field.p for c in coords):
        raise ConfigError(f"element {coords} has a coordinate outside GF({field.p})")
    return FieldElement(field, field.from_coords(coords))


def build_code(field: FieldSpec, cfg: dict) -> ParityCheck:
    construction = cfg.get("construction", "explicit" if "H" in cfg else "gabidulin")
    if construction == "gabidulin":
        if "n" not in cfg or "k" not in cfg:
            raise ConfigError("gabidulin construction needs n and k")
        g = [element(field, c) for c in cfg["g"]] if "g" in cfg else None
        return gabidulin_parity_check(field, cfg["n"], cfg["k"], g)
    if "H" not in cfg:
        raise ConfigError("explicit code needs H")
    rows = [[element(field, c) for c in row] for row in cfg["H"]]
    n = cfg.get("n", len(rows[0]) if rows else None)
    if n is None:
        raise ConfigError("explicit code with no rows needs n")
    pc = parity_check(field, rows, n)
    if "k" in cfg and cfg["k"] != pc.k:
        raise ConfigError(f"k={cfg['k']} but H has {pc.k} rows")
    return pc


def build_schedule(cfg: dict, q: int, n: int | None = None) -> TapSchedule:
    slots = cfg["slots"]
    mu = cfg.get("mu")
    blocks = [None if s == "inactive" else np.asarray(s["B"], dtype=np.int64) for s in slots]
    shapes = {b.shape for b in blocks if b is not None}
    if len(shapes) > 1:
        raise ConfigError(f"slot matrices have different shapes: {sorted(shapes)}")
    if shapes:
        (mu_b, n_b), = shapes
        if mu is not None and mu != mu_b:
            raise ConfigError(f"mu={mu} but slot matrices have {mu_b} rows")
        if n is not None and n != n_b:
            raise ConfigError(f"slot matrices have {n_b} columns, code has n={n}")
        sched = TapSchedule.from_blocks(blocks, q)
    else:
        if mu is None or n is None:
            raise ConfigError("an all-inactive schedule needs mu and a code")
        sched = TapSchedule.zero(len(slots), mu, n, q)
    if "m" in cfg and cfg["m"] != sched.m:
        raise ConfigError(f"m={cfg['m']} but {sched.m} slots listed")
    return sched


def build_network(cfg: dict, q: int) -> Network:
    links = tuple(Link(ln["id"], ln["from"], ln["to"]) for ln in cfg["links"])
    coef = {}
    for lid, c in cfg.get("coefficients", {}).items():
        coef[lid] = tuple(c) if isinstance(c, list) else dict(c)
    try:
        return Network(cfg.get("q", q), cfg["n"], cfg["source"], tuple(cfg.get("sinks", ())), links, coef)
    except KeyError as exc:
        raise ConfigError(f"unknown link {exc}") from None
