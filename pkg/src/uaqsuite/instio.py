"""Reading and writing instance and solution documents.

Documents are JSON. An instance document carries label lists plus the two
budgets; a solution document carries a verdict, the chosen role labels,
the engine name and the wall-clock time. Serialization is canonical:
identifier lists are sorted, assignment pairs are sorted, constraints are
ordered by their lowest role label. Parsing applies no reductions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import InputError, ParseError
from .model import Instance, bits, make_instance

INSTANCE_SUFFIX = ".uaq.json"
SOLUTION_SUFFIX = ".sol.json"


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno) from None


def _string_list(doc, key, required=True):
    if key not in doc:
        if required:
            raise ParseError(f"missing key {key!r}")
        return None
    val = doc[key]
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        raise ParseError(f"key {key!r} must be a list of strings")
    return val


def _budget(doc, key):
    val = doc.get(key)
    if not isinstance(val, int) or isinstance(val, bool) or val < 0:
        raise ParseError(f"key {key!r} must be a non-negative integer")
    return val


def parse_instance(text: str) -> Instance:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    roles = _string_list(doc, "roles")
    perms = _string_list(doc, "permissions")
    rp_raw = doc.get("rp")
    if not isinstance(rp_raw, list):
        raise ParseError("key 'rp' must be a list of [role, permission] pairs")
    rp = []
    for item in rp_raw:
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(x, str) for x in item)):
            raise ParseError("key 'rp' must be a list of [role, permission] pairs")
        rp.append((item[0], item[1]))
    plb = _string_list(doc, "plb")
    pub = _string_list(doc, "pub", required=False)
    cons = []
    for item in doc.get("constraints", []):
        if not isinstance(item, dict):
            raise ParseError("each constraint must be an object with 'roles' and 't'")
        xs = _string_list(item, "roles")
        t = item.get("t")
        if not isinstance(t, int) or isinstance(t, bool) or t < 1:
            raise ParseError("constraint threshold 't' must be a positive integer")
        cons.append((xs, t))
    return make_instance(
        roles=roles,
        permissions=perms,
        rp=rp,
        plb=plb,
        pub=pub,
        constraints=cons,
        kr=_budget(doc, "kr"),
        kp=_budget(doc, "kp"),
    )


def instance_document(inst: Instance) -> dict:
    """Canonical JSON-ready form with every list sorted."""
    role_order = sorted(inst.role_labels)
    perm_order = sorted(inst.perm_labels)
    pairs = sorted(
        (inst.role_labels[r], inst.perm_labels[p]) for r, p in inst.rp
    )
    cons_docs = []
    for con in inst.constraints:
        labels = sorted(inst.role_labels[i] for i in con.roles)
        cons_docs.append({"roles": labels, "t": con.t})
    cons_docs.sort(key=lambda c: (c["roles"], c["t"]))
    return {
        "roles": role_order,
        "permissions": perm_order,
        "rp": [list(p) for p in pairs],
        "plb": sorted(inst.perm_labels[i] for i in bits(inst.plb_mask)),
        "pub": sorted(inst.perm_labels[i] for i in bits(inst.pub_mask)),
        "constraints": cons_docs,
        "kr": inst.kr,
        "kp": inst.kp,
    }


def serialize_instance(inst: Instance) -> str:
    """Canonical text form; parse(serialize(i)) equals i up to id order."""
    return json.dumps(instance_document(inst), indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class SolutionDocument:
    status: str  # "sat" or "unsat"
    roles: Optional[frozenset[str]]
    engine: str
    wall_ms: float
    leaves: Optional[int] = None
    table_cells: Optional[int] = None

    def __post_init__(self):
        if self.status not in ("sat", "unsat"):
            raise InputError(f"unknown solution status {self.status!r}")
        if (self.status == "sat") != (self.roles is not None):
            raise InputError("role list must be present exactly when status is sat")


def parse_solution(text: str) -> SolutionDocument:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise ParseError("solution document must be a JSON object")
    status = doc.get("status")
    if status not in ("sat", "unsat"):
        raise ParseError("key 'status' must be 'sat' or 'unsat'")
    roles = _string_list(doc, "roles", required=(status == "sat"))
    if status == "unsat" and roles is not None:
        raise ParseError("an unsat document must not list roles")
    engine = doc.get("engine")
    if not isinstance(engine, str):
        raise ParseError("key 'engine' must be a string")
    wall_ms = doc.get("wall_ms")
    if not isinstance(wall_ms, (int, float)) or isinstance(wall_ms, bool) or wall_ms < 0:
        raise ParseError("key 'wall_ms' must be a non-negative number")
    extra = {}
    for key in ("leaves", "table_cells"):
        if key in doc:
            val = doc[key]
            if not isinstance(val, int) or isinstance(val, bool) or val < 0:
                raise ParseError(f"key {key!r} must be a non-negative integer")
            extra[key] = val
    return SolutionDocument(
        status=status,
        roles=None if roles is None else frozenset(roles),
        engine=engine,
        wall_ms=float(wall_ms),
        **extra,
    )


def serialize_solution(doc: SolutionDocument) -> str:
    out = {"status": doc.status}
    if doc.roles is not None:
        out["roles"] = sorted(doc.roles)
    out["engine"] = doc.engine
    out["wall_ms"] = round(doc.wall_ms, 3)
    if doc.leaves is not None:
        out["leaves"] = doc.leaves
    if doc.table_cells is not None:
        out["table_cells"] = doc.table_cells
    return json.dumps(out, indent=2, ensure_ascii=False) + "\n"


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def save_instance(path, inst: Instance) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(inst))


def load_solution(path) -> SolutionDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_solution(fh.read())


def save_solution(path, doc: SolutionDocument) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_solution(doc))
