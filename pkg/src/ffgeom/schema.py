"""Stable JSON encoding of certificates and audit reports.

Integers that can exceed 2^53 (bounds, counts) are written as decimal strings.
"""
from __future__ import annotations

import json

CERTIFICATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "regime", "params", "tree", "pins", "recursion", "bounds", "flags"],
    "properties": {
        "schema_version": {"const": "1"},
        "regime": {"enum": ["medium_prime", "large_prime", "large_q", "arbitrary"]},
        "params": {
            "type": "object",
            "required": ["regime", "K", "threshold_rule", "split_strategy", "enumeration_budget", "p", "e"],
        },
        "tree": {"type": "string"},
        "pins": {"type": "array", "items": {"$ref": "#/$defs/point"}},
        "recursion": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "parent", "case", "tree", "pin_pool_size", "vertex_pool_size",
                             "subpools", "blocks", "extracted_size", "sub_bound"],
                "properties": {
                    "id": {"type": "integer"},
                    "parent": {"type": ["integer", "null"]},
                    "case": {"enum": ["base", "deg1", "split", "empty"]},
                    "threshold": {"type": ["string", "null"]},
                    "s": {"type": ["integer", "null"]},
                    "subpools": {"type": "object",
                                 "additionalProperties": {"type": "array", "items": {"$ref": "#/$defs/point"}}},
                    "blocks": {"type": "array", "items": {"type": "object",
                                                           "required": ["size", "extracted_size"]}},
                    "sub_bound": {"$ref": "#/$defs/bigint"},
                },
            },
        },
        "bounds": {
            "type": "object",
            "required": ["per_pin_bound", "pin_bounds"],
            "properties": {
                "per_pin_bound": {"$ref": "#/$defs/bigint"},
                "pin_bounds": {"type": "array", "items": {
                    "type": "object", "required": ["pin", "bound"],
                    "properties": {"pin": {"$ref": "#/$defs/point"}, "bound": {"$ref": "#/$defs/bigint"}}}},
            },
        },
        "flags": {"type": "object", "required": ["sound", "hypothesis_in_range"],
                  "properties": {"sound": {"type": "boolean"}, "hypothesis_in_range": {"type": "boolean"}}},
    },
    "$defs": {
        "point": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
        "bigint": {"type": "string", "pattern": "^-?[0-9]+$"},
    },
}

AUDIT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "inequality", "lhs", "rhs", "holds", "borderline", "premise_in_range", "witness"],
    "properties": {
        "schema_version": {"const": "1"},
        "inequality": {"type": "string"},
        "lhs": {"type": "string", "pattern": "^-?[0-9]+$"},
        "rhs": {"type": "string"},
        "rhs_error": {"type": "string"},
        "holds": {"type": "boolean"},
        "borderline": {"type": "boolean"},
        "premise_in_range": {"type": "boolean"},
        "witness": {"type": ["object", "null"]},
        "details": {"type": "object"},
    },
}


def _pts(P):
    return [list(p) for p in P]


def certificate_to_json(c) -> dict:
    nodes = []

    def visit(node, parent):
        nid = len(nodes)
        rec = {
            "id": nid,
            "parent": parent,
            "case": node.case,
            "tree": node.tree,
            "pin_pool_size": node.pin_pool.n,
            "vertex_pool_size": node.vertex_pool.n,
            "threshold": None if node.threshold is None else str(node.threshold),
            "s": node.s,
            "subpools": {name: _pts(P) for name, P in node.subpools.items()},
            "blocks": [{"size": G.n, "extracted_size": Gp.n}
                       for G, Gp in zip(node.blocks, node.block_extracted)],
            "extracted_size": node.extracted.n,
            "sub_bound": str(node.sub_bound),
        }
        nodes.append(rec)
        for child in node.children:
            visit(child, nid)

    visit(c.root, None)
    params = c.params.to_dict()
    params.update(p=c.pins.ctx.p, e=c.pins.ctx.e)
    return {
        "schema_version": "1",
        "regime": c.regime,
        "params": params,
        "tree": c.tree.text(),
        "pins": _pts(c.pins),
        "recursion": nodes,
        "bounds": {
            "per_pin_bound": str(c.per_pin_bound),
            "pin_bounds": [{"pin": list(x), "bound": str(b)} for x, b in sorted(c.pin_bounds.items())],
        },
        "flags": {"sound": c.sound, "hypothesis_in_range": c.hypothesis_in_range, **_jsonable(c.flags)},
    }


def audit_to_json(r) -> dict:
    return {
        "schema_version": "1",
        "inequality": r.inequality,
        "lhs": str(r.lhs),
        "rhs": r.rhs_text,
        "rhs_error": r.rhs_error,
        "holds": r.holds,
        "borderline": r.borderline,
        "premise_in_range": r.premise_in_range,
        "witness": _jsonable(r.witness),
        "details": _jsonable(r.details),
    }


def _jsonable(obj):
    if obj is None or isinstance(obj, (bool, str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > 2**53 else obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
