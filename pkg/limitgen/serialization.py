"""
JSON encoding of cell systems, sets, collections and hard instances.

Structured sets are written out in full (system, cells, corrections as
intervals). Opaque sets only survive when they come from the builtin
registry; anything else raises SerializationError. Instances are written
with their certificate and rebuilt through the instance builders.
"""

import json
import logging
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from limitgen.adversaries.instances import HardInstance, build_instance
from limitgen.builtins import OPAQUE_BUILTINS, opaque_builtin
from limitgen.cells import (
    BlockPartitionSystem,
    CellSystem,
    FactorialBlockSystem,
    PowerRoundRobinSystem,
    ProductSystem,
    ResidueSystem,
    TrivialSystem,
)
from limitgen.exceptions import SerializationError
from limitgen.languages import FiniteCollection, Language
from limitgen.ranges import RangeSet
from limitgen.sets import OpaqueSet, SetExpr, StructuredSet

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


# ==================== Plain values ====================

def to_jsonable(value: Any) -> Any:
    """Fractions become "p/q" strings, enums their values, SetExprs and cell systems dicts."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, SetExpr):
        return set_to_dict(value)
    if isinstance(value, CellSystem):
        return system_to_dict(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if isinstance(value, Enum):
        return value.value
    return value


def dumps(value: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(to_jsonable(value), indent=indent, sort_keys=True)


# ==================== Cell systems ====================

def system_to_dict(system: CellSystem) -> Dict[str, Any]:
    params = dict(system.params())
    if params.get("base") is not None:
        params["base"] = set_to_dict(params["base"])
    if isinstance(params.get("other"), CellSystem):
        params["other"] = system_to_dict(params["other"])
    return {"system": system.name, "params": params}


def system_from_dict(data: Dict[str, Any]) -> CellSystem:
    try:
        name = data["system"]
        params = dict(data.get("params", {}))
    except (KeyError, TypeError, AttributeError):
        raise SerializationError(f"Malformed cell system: {data!r}")
    base = params.get("base")
    if base is not None:
        base = set_from_dict(base)
        if not isinstance(base, StructuredSet):
            raise SerializationError("A positional cell system needs a structured base set")
    try:
        if name == TrivialSystem.name:
            return TrivialSystem()
        if name == ResidueSystem.name:
            return ResidueSystem(int(params["modulus"]))
        if name == PowerRoundRobinSystem.name:
            return PowerRoundRobinSystem(int(params["round_robin"]), base)
        if name == BlockPartitionSystem.name:
            return BlockPartitionSystem(int(params["bins"]), base)
        if name == FactorialBlockSystem.name:
            return FactorialBlockSystem()
        if name == ProductSystem.name:
            return ProductSystem(int(params["modulus"]), system_from_dict(params["other"]))
    except KeyError as e:
        raise SerializationError(f"Cell system '{name}' is missing parameter {e}")
    raise SerializationError(f"Unknown cell system '{name}'")


# ==================== Sets ====================

def _intervals(r: RangeSet) -> List[List[int]]:
    return [[a, b] for a, b in r.intervals]


def set_to_dict(s: SetExpr) -> Dict[str, Any]:
    if isinstance(s, StructuredSet):
        data = {
            "type": "structured",
            "cells_system": system_to_dict(s.system),
            "cells": sorted(s.cells),
            "plus": _intervals(s.plus),
            "minus": _intervals(s.minus),
        }
        if s.name is not None:
            data["name"] = s.name
        return data
    if isinstance(s, OpaqueSet) and s.name in OPAQUE_BUILTINS:
        return {"type": "opaque", "builtin": s.name, "params": dict(s.params)}
    raise SerializationError(f"{s.describe()} is not a builtin and cannot be serialized")


def set_from_dict(data: Dict[str, Any]) -> SetExpr:
    if not isinstance(data, dict):
        raise SerializationError(f"Expected a set object, got {data!r}")
    kind = data.get("type")
    if kind == "opaque":
        try:
            return opaque_builtin(data["builtin"], data.get("params"))
        except KeyError as e:
            raise SerializationError(str(e))
        except TypeError as e:
            raise SerializationError(f"Bad parameters for opaque set {data.get('builtin')!r}: {e}")
    if kind != "structured":
        raise SerializationError(f"Unknown set type {kind!r}")
    try:
        system = system_from_dict(data["cells_system"])
        plus = RangeSet.from_intervals(tuple(i) for i in data.get("plus", []))
        minus = RangeSet.from_intervals(tuple(i) for i in data.get("minus", []))
        return StructuredSet(system, frozenset(data["cells"]), plus, minus, data.get("name"))
    except KeyError as e:
        raise SerializationError(f"Structured set is missing field {e}")
    except ValueError as e:
        raise SerializationError(f"Invalid structured set: {e}")


# ==================== Collections and instances ====================

def collection_to_dict(coll: FiniteCollection) -> Dict[str, Any]:
    return {
        "name": coll.name,
        "languages": [{"name": lang.name, "set": set_to_dict(lang.expr)} for lang in coll],
    }


def collection_from_dict(data: Dict[str, Any]) -> FiniteCollection:
    try:
        languages = [Language(set_from_dict(item["set"]), item["name"]) for item in data["languages"]]
        return FiniteCollection(languages, data.get("name", "collection"))
    except (KeyError, TypeError) as e:
        raise SerializationError(f"Malformed collection: {e}")


def _target_index(instance: HardInstance) -> Optional[int]:
    if isinstance(instance.collection, FiniteCollection):
        return instance.collection.index_of(instance.target)
    return None


def instance_to_dict(instance: HardInstance) -> Dict[str, Any]:
    cert = instance.certificate
    data: Dict[str, Any] = {
        "format": FORMAT_VERSION,
        "name": instance.name,
        "kind": cert.kind,
        "k": cert.k,
        "params": to_jsonable(cert.params),
        "target": _target_index(instance),
    }
    if cert.masks:
        data["masks"] = [list(m.members) for m in cert.masks]
    if cert.system is not None:
        data["cells_system"] = system_to_dict(cert.system)
    if isinstance(instance.collection, FiniteCollection):
        data["collection"] = collection_to_dict(instance.collection)
    return data


def instance_from_dict(data: Dict[str, Any]) -> HardInstance:
    """Rebuild an instance from its certificate; the stored collection is checked against the rebuilt one."""
    if not isinstance(data, dict) or "kind" not in data:
        raise SerializationError("An instance document needs a 'kind'")
    params = {k: v for k, v in data.get("params", {}).items() if k in ("a", "b", "c", "z")}
    try:
        instance = build_instance(data["kind"], data.get("k") or None, data.get("target"), **params)
    except (ValueError, IndexError) as e:
        raise SerializationError(f"Cannot rebuild instance: {e}")
    stored = data.get("collection")
    if stored is not None:
        expected = [item["set"] for item in stored.get("languages", [])]
        rebuilt = [set_to_dict(lang.expr) for lang in instance.collection]
        if expected != rebuilt:
            raise SerializationError(f"Stored collection of {data.get('name')} does not match its certificate")
    logger.debug(f"Rebuilt instance {instance.name} from JSON")
    return instance


def loads_instance(text: str) -> HardInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SerializationError(f"Invalid JSON: {e}")
    return instance_from_dict(data)
