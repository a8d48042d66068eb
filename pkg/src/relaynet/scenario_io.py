"""Scenario file handling: JSON schema, validation diagnostics, and the
canonical serialization used for byte-stable round trips."""

from __future__ import annotations

import hashlib
import json
from typing import Optional

from .errors import InvalidScenarioError
from .geometry import Disk, Point2
from .network import Scenario

SCHEMA_VERSION = 1


def scenario_to_dict(s: Scenario, seed: int = 0,
                     optimizer_overrides: Optional[dict] = None,
                     prescan_overrides: Optional[dict] = None) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "units": s.units,
        "terminals": [[p.x, p.y] for p in s.terminals],
        "obstacles": [{"cx": o.center.x, "cy": o.center.y, "r": o.radius}
                      for o in s.obstacles],
        "relay_budget": s.relay_budget,
        "seed": seed,
    }
    if optimizer_overrides:
        doc["optimizer"] = dict(optimizer_overrides)
    if prescan_overrides:
        doc["prescan"] = dict(prescan_overrides)
    return doc


def canonical_json(doc: dict) -> str:
    """Stable serialization: sorted keys, two-space indent, trailing
    newline. Floats use Python's shortest round-trip repr."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def scenario_digest(doc: dict) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()[:16]


def _field(doc, key, types, where):
    if key not in doc:
        raise InvalidScenarioError(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, types):
        raise InvalidScenarioError(
            f"{where}: field {key!r} has type {type(value).__name__}")
    return value


def scenario_from_dict(doc: dict) -> tuple:
    """Build (Scenario, seed, optimizer overrides, prescan overrides)
    from a parsed document, naming the offending field on error."""
    if not isinstance(doc, dict):
        raise InvalidScenarioError("top level must be an object")
    schema = _field(doc, "schema", int, "document")
    if schema != SCHEMA_VERSION:
        raise InvalidScenarioError(f"unsupported schema version {schema}")
    terms_raw = _field(doc, "terminals", list, "document")
    terminals = []
    for i, entry in enumerate(terms_raw):
        if (not isinstance(entry, list) or len(entry) != 2
                or not all(isinstance(v, (int, float)) for v in entry)):
            raise InvalidScenarioError(
                f"terminals[{i}]: expected [x, y] numbers")
        terminals.append(Point2(float(entry[0]), float(entry[1])))
    obstacles = []
    for i, entry in enumerate(doc.get("obstacles", [])):
        if not isinstance(entry, dict):
            raise InvalidScenarioError(f"obstacles[{i}]: expected an object")
        try:
            obstacles.append(Disk(Point2(float(entry["cx"]),
                                         float(entry["cy"])),
                                  float(entry["r"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidScenarioError(f"obstacles[{i}]: {exc}")
    budget = _field(doc, "relay_budget", int, "document")
    units = doc.get("units", "km")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise InvalidScenarioError("seed: expected an integer")
    scenario = Scenario(terminals, obstacles, budget, units)
    return (scenario, seed, dict(doc.get("optimizer", {})),
            dict(doc.get("prescan", {})))


def load_scenario(path: str) -> tuple:
    """Parse and validate a scenario file; JSON syntax errors surface
    with line/column, structural errors with the field name."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidScenarioError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")
    try:
        return scenario_from_dict(doc)
    except InvalidScenarioError as exc:
        raise InvalidScenarioError(f"{path}: {exc}")


def save_scenario(path: str, s: Scenario, seed: int = 0,
                  optimizer_overrides: Optional[dict] = None,
                  prescan_overrides: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(scenario_to_dict(
            s, seed, optimizer_overrides, prescan_overrides)))
