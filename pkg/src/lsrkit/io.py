"""JSON input documents: sparse index lists with exact rational strings.

A document looks like::

    {
      "base_algebra": {"dim": 2, "product": [[0, 0, 0, "1"], ...], "unit": 0},
      "lsr": {"dim": 2, "action": [...], "product": [[0, 0, 0, "1"], ...], "anchor": []},
      "representations": {"name": {"kind": "lsr-pair", "dim": 2, "action": [...], "rho": [...], "mu": [...]}},
      "operators": {"N": [[0, 0, "1"]]},
      "module_maps": {"T": {"rep": "adjoint", "entries": [[0, 1, "1"]]}},
      "deformations": {"d": {"terms": [[[0, 1, 1, "1/2"]]]}},
      "automorphisms": {"phi": {"maps": [[[0, 1, "1"]]]}},
      "subspaces": {"S": {"kind": "ideal", "basis": [["0", "1"]]}},
      "morphisms": {"f": {"f": [[0, 0, "1"]], "g": [[0, 0, "1"]]}}
    }

Indices are 0-based.  Omitted entries are zero.  ``lie_rinehart`` (with a
``bracket``) may replace ``lsr``.  ``base_algebra`` defaults to the ground
field, and the A-action of ``L`` or ``M`` defaults to the identity when
``A = K``.  The representation name ``adjoint`` is built in.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import linalg as la
from .algebra import LieRinehartAlgebra, LsrAlgebra, MorphismPair, StructureAlgebra, Subspace, left_multiplications
from .report import StructureError
from .representations import RepresentationBundle, adjoint_rep

__all__ = [
    "ParseError",
    "Document",
    "parse_document",
    "load_document",
    "document_digest",
    "sparse_entries",
    "algebra_document",
    "rep_document",
    "dump_document",
]

BUILTIN_REPS = ("adjoint",)


class ParseError(ValueError):
    """Malformed input; the message starts with the location inside the document."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def _value(where, v):
    if isinstance(v, bool) or isinstance(v, float):
        raise ParseError(where, f"value {v!r} is not exact; write integers or 'p/q' strings")
    try:
        return la.as_fraction(v)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(where, f"malformed rational {v!r}") from exc


def _index(where, v, bound):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(where, f"index {v!r} is not an integer")
    if not 0 <= v < bound:
        raise ParseError(where, f"index {v} out of range 0..{bound - 1}")
    return v


def _sparse(where, entries, shape) -> np.ndarray:
    out = la.zeros(shape)
    if entries is None:
        return out
    if not isinstance(entries, list):
        raise ParseError(where, "expected a list of index/value entries")
    seen = set()
    for pos, entry in enumerate(entries):
        loc = f"{where}[{pos}]"
        if not isinstance(entry, list) or len(entry) != len(shape) + 1:
            raise ParseError(loc, f"expected {len(shape)} indices and a value")
        idx = tuple(_index(loc, v, b) for v, b in zip(entry[:-1], shape))
        if idx in seen:
            raise ParseError(loc, f"duplicate entry for {list(idx)}")
        seen.add(idx)
        out[idx] = _value(loc, entry[-1])
    return out


def _vector(where, v, n) -> np.ndarray:
    if not isinstance(v, list) or len(v) != n:
        raise ParseError(where, f"expected a list of {n} values")
    return la.qarray([_value(f"{where}[{i}]", x) for i, x in enumerate(v)])


def _dim(where, block) -> int:
    d = block.get("dim") if isinstance(block, dict) else None
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ParseError(f"{where}.dim", "missing or non-positive dimension")
    return d


def _section(doc, key, where=None) -> dict:
    block = doc.get(key, {})
    if not isinstance(block, dict):
        raise ParseError(where or key, "expected an object")
    return block


def _action(where, block, a: StructureAlgebra, n):
    if "action" not in block:
        if a.dim != 1:
            raise ParseError(f"{where}.action", "required when dim A > 1")
        return la.eye(n).reshape(1, n, n)
    return _sparse(f"{where}.action", block["action"], (a.dim, n, n))


@dataclass
class Document:
    raw: dict
    a: StructureAlgebra
    structure: Any
    representations: dict = field(default_factory=dict)
    operators: dict = field(default_factory=dict)
    module_maps: dict = field(default_factory=dict)
    deformations: dict = field(default_factory=dict)
    automorphisms: dict = field(default_factory=dict)
    subspaces: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)

    @property
    def is_lie(self) -> bool:
        return isinstance(self.structure, LieRinehartAlgebra)

    def rep(self, name: Optional[str]):
        """Named representation; ``adjoint`` is built in.  Returns ``(rep, adjoint report or None)``."""
        name = name or "adjoint"
        if name in self.representations:
            return self.representations[name], None
        if name == "adjoint":
            if self.is_lie:
                g = self.structure
                return RepresentationBundle("lie-module", g.action, left_multiplications(g.bracket)), None
            return adjoint_rep(self.structure)
        raise ParseError("representations", f"no representation named {name!r}")

    def pick(self, kind: str, name: Optional[str]):
        table = getattr(self, kind)
        if not table:
            raise ParseError(kind, "block missing or empty")
        if name is None:
            if len(table) != 1:
                raise ParseError(kind, f"{len(table)} entries; choose one by name")
            name = next(iter(table))
        if name not in table:
            raise ParseError(kind, f"no entry named {name!r}")
        return name, table[name]


def parse_document(doc: Any) -> Document:
    if not isinstance(doc, dict):
        raise ParseError("document", "expected a JSON object")
    if "base_algebra" in doc:
        b = _section(doc, "base_algebra")
        da = _dim("base_algebra", b)
        prod = _sparse("base_algebra.product", b.get("product"), (da, da, da))
        unit = b.get("unit")
        if unit is not None:
            unit = _index("base_algebra.unit", unit, da)
        try:
            a = StructureAlgebra(prod, unit)
        except StructureError as exc:
            raise ParseError("base_algebra", str(exc)) from exc
    else:
        a = StructureAlgebra.ground_field()

    if ("lsr" in doc) == ("lie_rinehart" in doc):
        raise ParseError("document", "declare exactly one of 'lsr' or 'lie_rinehart'")
    key = "lsr" if "lsr" in doc else "lie_rinehart"
    blk = _section(doc, key)
    n = _dim(key, blk)
    action = _action(key, blk, a, n)
    tensor_key = "product" if key == "lsr" else "bracket"
    tensor = _sparse(f"{key}.{tensor_key}", blk.get(tensor_key), (n, n, n))
    anchor = _sparse(f"{key}.anchor", blk.get("anchor"), (n, a.dim, a.dim))
    try:
        structure = (LsrAlgebra if key == "lsr" else LieRinehartAlgebra)(a, action, tensor, anchor)
    except StructureError as exc:
        raise ParseError(key, str(exc)) from exc
    out = Document(doc, a, structure)

    for name, r in _section(doc, "representations").items():
        where = f"representations.{name}"
        if name in BUILTIN_REPS:
            raise ParseError(where, f"{name!r} is a reserved name")
        if not isinstance(r, dict):
            raise ParseError(where, "expected an object")
        m = _dim(where, r)
        kind = r.get("kind", "lie-module" if key == "lie_rinehart" else "lsr-pair")
        ract = _action(where, r, a, m)
        rho = _sparse(f"{where}.rho", r.get("rho"), (n, m, m))
        mu = _sparse(f"{where}.mu", r.get("mu"), (n, m, m)) if kind == "lsr-pair" else None
        try:
            out.representations[name] = RepresentationBundle(kind, ract, rho, mu)
        except StructureError as exc:
            raise ParseError(where, str(exc)) from exc

    for name, entries in _section(doc, "operators").items():
        out.operators[name] = _sparse(f"operators.{name}", entries, (n, n))

    for name, t in _section(doc, "module_maps").items():
        where = f"module_maps.{name}"
        if not isinstance(t, dict):
            raise ParseError(where, "expected an object with 'rep' and 'entries'")
        rep_name = t.get("rep", "adjoint")
        rep, _ = out.rep(rep_name)
        out.module_maps[name] = (rep_name, _sparse(f"{where}.entries", t.get("entries"), (n, rep.dim)))

    for name, d in _section(doc, "deformations").items():
        where = f"deformations.{name}"
        terms = d.get("terms") if isinstance(d, dict) else None
        if not isinstance(terms, list) or not terms:
            raise ParseError(where, "expected a non-empty 'terms' list")
        out.deformations[name] = [_sparse(f"{where}.terms[{i}]", t, (n, n, n)) for i, t in enumerate(terms)]

    for name, phi in _section(doc, "automorphisms").items():
        where = f"automorphisms.{name}"
        maps = phi.get("maps") if isinstance(phi, dict) else None
        if not isinstance(maps, list) or not maps:
            raise ParseError(where, "expected a non-empty 'maps' list")
        out.automorphisms[name] = [_sparse(f"{where}.maps[{i}]", p, (n, n)) for i, p in enumerate(maps)]

    for name, s in _section(doc, "subspaces").items():
        where = f"subspaces.{name}"
        if not isinstance(s, dict) or not isinstance(s.get("basis"), list):
            raise ParseError(where, "expected an object with a 'basis' list")
        kind = s.get("kind", "subalgebra")
        if kind not in ("subalgebra", "ideal"):
            raise ParseError(f"{where}.kind", f"unknown kind {kind!r}")
        vecs = tuple(_vector(f"{where}.basis[{i}]", v, n) for i, v in enumerate(s["basis"]))
        try:
            out.subspaces[name] = (kind, Subspace(vecs))
        except StructureError as exc:
            raise ParseError(where, str(exc)) from exc

    for name, fg in _section(doc, "morphisms").items():
        where = f"morphisms.{name}"
        if not isinstance(fg, dict):
            raise ParseError(where, "expected an object with 'f' and 'g'")
        f = _sparse(f"{where}.f", fg.get("f"), (n, n))
        g = _sparse(f"{where}.g", fg.get("g"), (a.dim, a.dim)) if "g" in fg else la.eye(a.dim)
        try:
            out.morphisms[name] = MorphismPair(f, g)
        except StructureError as exc:
            raise ParseError(where, str(exc)) from exc
    return out


def load_document(path: str) -> tuple[Document, bytes]:
    """Parse a file, or an embedded fixture when ``path`` is ``@NAME``."""
    if path.startswith("@"):
        from .fixtures import fixture_document

        try:
            data = json.dumps(fixture_document(path[1:]), sort_keys=True).encode()
        except KeyError as exc:
            raise ParseError(path, "unknown embedded fixture") from exc
    else:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise ParseError(path, exc.strerror or "cannot read file") from exc
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(path, f"invalid JSON ({exc})") from exc
    return parse_document(doc), data


def document_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sparse_entries(arr) -> list:
    """Nonzero entries as ``[i, j, ..., "p/q"]`` in lexicographic index order."""
    arr = np.asarray(arr, dtype=object)
    return [[int(i) for i in idx] + [la.format_rational(arr[idx])]
            for idx in np.ndindex(arr.shape) if arr[idx] != 0]


def algebra_document(structure) -> dict:
    a = structure.a
    doc = {}
    if not (a.dim == 1 and a.product[0, 0, 0] == 1 and a.unit == 0):
        doc["base_algebra"] = {"dim": a.dim, "product": sparse_entries(a.product)}
        if a.unit is not None:
            doc["base_algebra"]["unit"] = a.unit
    key, tensor_key = ("lie_rinehart", "bracket") if isinstance(structure, LieRinehartAlgebra) else ("lsr", "product")
    doc[key] = {
        "dim": structure.dim,
        "action": sparse_entries(structure.action),
        tensor_key: sparse_entries(getattr(structure, tensor_key)),
        "anchor": sparse_entries(structure.anchor),
    }
    return doc


def rep_document(rep: RepresentationBundle) -> dict:
    out = {"kind": rep.kind, "dim": rep.dim, "action": sparse_entries(rep.action), "rho": sparse_entries(rep.rho)}
    if rep.mu is not None:
        out["mu"] = sparse_entries(rep.mu)
    return out


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
