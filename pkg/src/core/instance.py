"""
Instance Loading

Reads instance files (YAML, JSON accepted), converts builtins to the same
schema, and turns instance entries into library values.

Names available even when a file does not declare them:
    cones    "chamber" (closed fundamental chamber), "full" (all of V)
    actions  "weyl" (the Weyl group acting on the Tits region of the chamber)
"""

import hashlib
import json
from typing import Tuple

import yaml
from pydantic import ValidationError

from backend.lattice.cone import Cone
from backend.lattice.corevec import IntMatrix, RationalCovector, RationalVector
from backend.lattice.exceptions import DomainError, InstanceParseError, UnknownNameError
from backend.lattice.looijenga import ConeAction
from backend.lattice.roots import Root, RootSystem, builtin
from backend.lattice.weyl import fundamental_chamber
from src.core.schema import InstanceFile, RootEntry

CHAMBER = "chamber"
FULL = "full"
WEYL = "weyl"


def parse_instance(text: str, source: str = "<string>") -> InstanceFile:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise InstanceParseError(f"{source}: not valid YAML: {e}")
    if not isinstance(data, dict):
        raise InstanceParseError(f"{source}: expected a mapping at the top level")
    try:
        return InstanceFile.model_validate(data)
    except ValidationError as e:
        raise InstanceParseError(f"{source}: {e}")


def load_instance_file(path: str) -> InstanceFile:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise InstanceParseError(f"Cannot read instance file {path}: {e}")
    return parse_instance(text, path)


def _integers(values, what: str):
    if any(v.denominator != 1 for v in values):
        raise DomainError(f"{what} is not integral and cannot be written to an instance file")
    return [v.numerator for v in values]


def builtin_instance(name: str) -> InstanceFile:
    rs = builtin(name)
    return InstanceFile(
        rank=rs.ambient_rank,
        name=rs.name or name,
        kind_tag=rs.kind_tag,
        roots=[RootEntry(E=_integers(r.E, f"E of {r.label}"), ell=_integers(r.ell, f"ell of {r.label}"),
                         label=r.label) for r in rs.roots],
    )


def load_source(file: str = None, builtin_name: str = None) -> Tuple[InstanceFile, str]:
    """The instance and a label for reports (path or builtin name)."""
    if file and builtin_name:
        raise InstanceParseError("Give either --file or --builtin, not both")
    if file:
        return load_instance_file(file), file
    if builtin_name:
        return builtin_instance(builtin_name), builtin_name
    raise InstanceParseError("An instance is required: use --file or --builtin")


def dump_instance(instance: InstanceFile) -> str:
    """Normalized JSON text; parse_instance(dump_instance(x)) dumps identically."""
    return json.dumps(instance.model_dump(mode="json", exclude_none=True), sort_keys=True, indent=2)


def instance_digest(instance: InstanceFile) -> str:
    payload = json.dumps(instance.model_dump(mode="json", exclude_none=True), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Conversion to library values
# ---------------------------------------------------------------------------

def to_root_system(instance: InstanceFile) -> RootSystem:
    roots = tuple(Root(RationalVector(tuple(r.E)), RationalCovector(tuple(r.ell)), r.label)
                  for r in instance.roots)
    return RootSystem(instance.rank, roots, instance.kind_tag, instance.name)


def to_cone(instance: InstanceFile, name: str) -> Cone:
    entry = instance.cones.get(name)
    if entry is not None:
        if entry.rays is not None:
            return Cone.from_rays(instance.rank, entry.rays)
        return Cone.from_facets(instance.rank, entry.facets)
    if name == CHAMBER:
        return fundamental_chamber(to_root_system(instance)).cone
    if name == FULL:
        return Cone.full_space(instance.rank)
    raise UnknownNameError(f"Unknown cone: {name}")


def to_action(instance: InstanceFile, name: str) -> ConeAction:
    entry = instance.actions.get(name)
    if entry is not None:
        generators = [IntMatrix(tuple(tuple(row) for row in m)) for m in entry.generators]
        return ConeAction.create(instance.rank, generators, to_cone(instance, entry.cone), entry.labels)
    if name == WEYL:
        return ConeAction.from_root_system(to_root_system(instance))
    raise UnknownNameError(f"Unknown action: {name}")
