"""JSON file form of structure tensors.

::

    {"n": 2, "field": {"kind": "rational"},
     "entries": [{"i": 1, "j": 1, "k": 1, "value": "1"}, ...]}

Indices are 1-based, values are strings in the field's text form, omitted
entries are zero, and unknown keys are rejected.
"""
from __future__ import annotations

import json

import numpy as np

from .exact import FieldSpec
from .tensors import StructureTensor


class TensorFormatError(ValueError):
    pass


def _check_keys(obj, allowed: set, required: set, where: str):
    if not isinstance(obj, dict):
        raise TensorFormatError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise TensorFormatError(f"{where}: unknown keys {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise TensorFormatError(f"{where}: missing keys {sorted(missing)}")


def field_to_dict(f: FieldSpec) -> dict:
    return {"kind": "rational"} if f.is_rational else {"kind": "prime", "p": f.p}


def field_from_dict(d) -> FieldSpec:
    _check_keys(d, {"kind", "p"}, {"kind"}, "field")
    if d["kind"] == "prime" and not isinstance(d.get("p"), int):
        raise TensorFormatError("field: prime kind needs an integer p")
    try:
        return FieldSpec(d["kind"], d.get("p"))
    except ValueError as exc:
        raise TensorFormatError(f"field: {exc}") from None


def tensor_to_dict(m: StructureTensor) -> dict:
    entries = [{"i": i + 1, "j": j + 1, "k": k + 1, "value": m.field.format(v)}
               for (i, j, k), v in sorted(m.nonzero().items())]
    return {"n": m.n, "field": field_to_dict(m.field), "entries": entries}


def tensor_from_dict(d) -> StructureTensor:
    _check_keys(d, {"n", "field", "entries"}, {"n", "field", "entries"}, "tensor")
    n = d["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise TensorFormatError("n must be a positive integer")
    f = field_from_dict(d["field"])
    if not isinstance(d["entries"], list):
        raise TensorFormatError("entries must be a list")
    e = f.zeros((n, n, n))
    seen = set()
    for k, ent in enumerate(d["entries"]):
        _check_keys(ent, {"i", "j", "k", "value"}, {"i", "j", "k", "value"}, f"entries[{k}]")
        idx = tuple(ent[key] for key in "ijk")
        if not all(isinstance(x, int) and not isinstance(x, bool) and 1 <= x <= n for x in idx):
            raise TensorFormatError(f"entries[{k}]: index out of range 1..{n}")
        if idx in seen:
            raise TensorFormatError(f"entries[{k}]: duplicate index {idx}")
        seen.add(idx)
        if not isinstance(ent["value"], str):
            raise TensorFormatError(f"entries[{k}]: value must be a string")
        try:
            e[tuple(x - 1 for x in idx)] = f.parse(ent["value"])
        except ValueError as exc:
            raise TensorFormatError(f"entries[{k}]: {exc}") from None
    return StructureTensor(f, e)


def dumps(m: StructureTensor) -> str:
    return json.dumps(tensor_to_dict(m), indent=2) + "\n"


def loads(text: str) -> StructureTensor:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"not JSON: {exc}") from None
    return tensor_from_dict(d)


def matrix_to_list(f: FieldSpec, g: np.ndarray) -> list[list[str]]:
    return [[f.format(x) for x in row] for row in g]
