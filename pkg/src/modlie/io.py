"""JSON (de)serialization for algebra inputs, modules and reports.

Field elements are serialized as little-endian coefficient lists in the field
generator, with the defining polynomial printed alongside, so files carry no
dependence on external polynomial tables.  Serialization is canonical (sorted
keys, two-space indent, trailing newline), which is what makes reports
byte-identical across runs.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import ValidationError
from .field import DEFAULT_FIELD_CAP, FiniteField, GF
from .liealg import LieAlgebra
from .linalg import Subspace
from .rep import Character, Representation
from .restricted import PMap


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def coeffs_json(F: FiniteField, packed: int) -> list[int]:
    c = list(F.coeffs(int(packed)))
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def parse_coeffs(F: FiniteField, obj) -> int:
    if isinstance(obj, int):
        return obj % F.p
    if not isinstance(obj, list) or not all(isinstance(v, int) for v in obj):
        raise ValidationError(f"bad coefficient value: {obj!r}")
    if len(obj) > F.degree:
        raise ValidationError("coefficient list longer than the field degree")
    return F.pack([v % F.p for v in obj])


def field_json(F: FiniteField) -> dict:
    return {"p": F.p, "degree": F.degree, "modulus": list(F.modulus)}


def parse_field(obj, cap: int = DEFAULT_FIELD_CAP) -> FiniteField:
    F = GF(int(obj["p"]), int(obj["degree"]), cap=cap)
    if "modulus" in obj and tuple(obj["modulus"]) != F.modulus:
        raise ValidationError(
            "only the canonical defining polynomial is supported; "
            f"expected {list(F.modulus)}"
        )
    return F


# -- algebra files -----------------------------------------------------------

def algebra_json(L: LieAlgebra, pmap: PMap | None = None, labels=None) -> dict:
    F = L.field
    bracket = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            for k in range(L.dim):
                v = int(L.c[i, j, k])
                if v:
                    bracket.append([i, j, k, coeffs_json(F, v)])
    out = {
        "p": F.p,
        "base_degree": F.degree,
        "dim": L.dim,
        "bracket": bracket,
    }
    if pmap is not None:
        out["pmap"] = [
            [coeffs_json(F, int(v)) for v in row] for row in pmap.values
        ]
    if labels is not None:
        out["labels"] = list(labels)
    return out


def parse_algebra(obj, field_cap: int = DEFAULT_FIELD_CAP):
    """Returns (LieAlgebra, PMap or None, labels or None); validates both."""
    try:
        p = int(obj["p"])
        dim = int(obj["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed algebra file: {exc}") from exc
    degree = int(obj.get("base_degree", 1))
    F = GF(p, degree, cap=field_cap)
    entries = []
    for item in obj.get("bracket", []):
        if not isinstance(item, list) or len(item) != 4:
            raise ValidationError(f"bad bracket entry: {item!r}")
        i, j, k, coeff = item
        entries.append((int(i), int(j), int(k), parse_coeffs(F, coeff)))
    L = LieAlgebra.from_sparse_brackets(F, dim, entries)
    L.require_valid()
    pmap = None
    if obj.get("pmap") is not None:
        rows = obj["pmap"]
        if len(rows) != dim:
            raise ValidationError("p-map needs one value vector per basis element")
        vals = np.zeros((dim, dim), dtype=np.int64)
        for i, row in enumerate(rows):
            if len(row) != dim:
                raise ValidationError("p-map value vector has wrong length")
            for j, cc in enumerate(row):
                vals[i, j] = parse_coeffs(F, cc)
        pmap = PMap(L, vals)
    labels = obj.get("labels")
    if labels is not None and len(labels) != dim:
        raise ValidationError("labels must match the dimension")
    return L, pmap, labels


def load_algebra_file(path: str, field_cap: int = DEFAULT_FIELD_CAP):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"input is not valid JSON: {exc}") from exc
    return parse_algebra(obj, field_cap)


def input_digest(obj) -> str:
    """Digest of the canonicalized parsed content, stable under whitespace."""
    L, pmap, labels = obj
    return hashlib.sha256(
        canonical_json(algebra_json(L, pmap, labels)).encode()
    ).hexdigest()


# -- subspaces, matrices, modules, characters -----------------------------------

def subspace_json(S: Subspace) -> dict:
    F = S.field
    return {
        "dim": S.dim,
        "basis": [[coeffs_json(F, int(v)) for v in row] for row in S.basis],
    }


def module_json(V: Representation) -> dict:
    K = V.field
    return {
        "field": field_json(K),
        "dim": V.dim,
        "matrices": [
            [[coeffs_json(K, int(v)) for v in row] for row in mat]
            for mat in V.mats
        ],
    }


def parse_module(obj, L: LieAlgebra, field_cap: int = DEFAULT_FIELD_CAP) -> Representation:
    K = parse_field(obj["field"], cap=field_cap)
    dim = int(obj["dim"])
    mats_obj = obj["matrices"]
    if len(mats_obj) != L.dim:
        raise ValidationError("module needs one matrix per algebra basis element")
    mats = np.zeros((L.dim, dim, dim), dtype=np.int64)
    for i, mat in enumerate(mats_obj):
        if len(mat) != dim or any(len(row) != dim for row in mat):
            raise ValidationError("module matrix has wrong shape")
        for r, row in enumerate(mat):
            for cidx, cc in enumerate(row):
                mats[i, r, cidx] = parse_coeffs(K, cc)
    return Representation(L, K, mats)


def load_module_file(path: str, L: LieAlgebra, field_cap: int = DEFAULT_FIELD_CAP) -> Representation:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"module file is not valid JSON: {exc}") from exc
    if "result" in obj and isinstance(obj["result"], dict) and "module" in obj["result"]:
        obj = obj["result"]["module"]
    return parse_module(obj, L, field_cap)


def character_json(c: Character) -> dict:
    E = c.field
    return {
        "field": field_json(E),
        "values": [coeffs_json(E, v) for v in c.values],
    }
