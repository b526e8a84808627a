"""JSON schemas for job files.

These dicts are the single source of truth; the copies under /schemas
in the repository root are generated from them and guarded by a drift
test.  All schemas reject unknown fields so that misspelled keys fail
loudly instead of being ignored.
"""

import json

__all__ = [
    "SCHEMA_VERSION",
    "COMMANDS",
    "SURFACE_SCHEMA",
    "VECTOR_SCHEMA",
    "JOB_SCHEMA",
    "INPUT_SCHEMAS",
    "input_schema",
    "schema_texts",
]

SCHEMA_VERSION = "1"

COMMANDS = (
    "pair",
    "perp",
    "fm",
    "walls",
    "classify",
    "kummer",
    "deform",
    "albanese-check",
    "fujiki",
    "report",
)

_INT_ARRAY = {"type": "array", "items": {"type": "integer"}, "minItems": 1}

# exact rational: a JSON integer or a "p/q" / "p" decimal string
_RATIONAL = {
    "anyOf": [
        {"type": "integer"},
        {"type": "string", "pattern": "^-?[0-9]+(/-?[0-9]+)?$"},
    ]
}

SURFACE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "surface",
    "type": "object",
    "properties": {
        "kind": {"enum": ["abelian", "K3"]},
        "ns_gram": {
            "type": "array",
            "items": _INT_ARRAY,
            "minItems": 1,
        },
        "ample_ray": _INT_ARRAY,
    },
    "required": ["kind", "ns_gram"],
    "additionalProperties": False,
}

VECTOR_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "vector",
    "type": "object",
    "properties": {
        "r": {"type": "integer"},
        "c1": _INT_ARRAY,
        "a": {"type": "integer"},
    },
    "required": ["r", "c1", "a"],
    "additionalProperties": False,
}

_VECTOR_REF = {"$ref": "#/$defs/vector"}

_ISOTROPIC_PARAMS = {
    "type": "object",
    "properties": {
        "r0": {"type": "integer"},
        "d0": {"type": "integer"},
        "k": {"type": "integer"},
        "d1": {"type": "integer"},
        "l": {"type": "integer"},
    },
    "required": ["r0", "d0", "k"],
    "additionalProperties": False,
}

_FIBRATION = {
    "type": "object",
    "properties": {
        "sigma": _INT_ARRAY,
        "f": _INT_ARRAY,
        "tau": _INT_ARRAY,
    },
    "required": ["sigma", "f", "tau"],
    "additionalProperties": False,
}

INPUT_SCHEMAS = {
    "pair": {
        "type": "object",
        "properties": {"v": _VECTOR_REF, "w": _VECTOR_REF},
        "required": ["v"],
        "additionalProperties": False,
    },
    "perp": {
        "type": "object",
        "properties": {"v": _VECTOR_REF},
        "required": ["v"],
        "additionalProperties": False,
    },
    "fm": {
        "type": "object",
        "properties": {
            "map": {
                "enum": [
                    "poincare-f",
                    "poincare-g",
                    "dual",
                    "twist",
                    "isotropic",
                    "isotropic-g",
                    "elliptic",
                    "reflection",
                ]
            },
            "v": _VECTOR_REF,
            "twist_class": _INT_ARRAY,
            "isotropic": _ISOTROPIC_PARAMS,
            "fibration": _FIBRATION,
            "v1": _VECTOR_REF,
            "w1": _VECTOR_REF,
        },
        "required": ["map", "v"],
        "additionalProperties": False,
    },
    "walls": {
        "type": "object",
        "properties": {
            "c1": _INT_ARRAY,
            "chi": {"type": "integer"},
            "l0": _INT_ARRAY,
            "segment": {
                "type": "object",
                "properties": {"p0": _INT_ARRAY, "p1": _INT_ARRAY},
                "required": ["p0", "p1"],
                "additionalProperties": False,
            },
            "point": _INT_ARRAY,
        },
        "required": ["c1", "chi"],
        "additionalProperties": False,
    },
    "classify": {
        "type": "object",
        "properties": {
            "v": _VECTOR_REF,
            "isotropic": _ISOTROPIC_PARAMS,
            "fibration": _FIBRATION,
            "reflection": {
                "type": "object",
                "properties": {"v1": _VECTOR_REF, "w1": _VECTOR_REF},
                "required": ["v1", "w1"],
                "additionalProperties": False,
            },
            "star_asserted": {"type": "boolean"},
        },
        "required": ["v"],
        "additionalProperties": False,
    },
    "kummer": {
        "type": "object",
        "properties": {"v": _VECTOR_REF},
        "required": ["v"],
        "additionalProperties": False,
    },
    "deform": {
        "type": "object",
        "properties": {
            "v": _VECTOR_REF,
            "vectors": {"type": "array", "items": _VECTOR_REF, "minItems": 1},
        },
        "additionalProperties": False,
    },
    "albanese-check": {
        "type": "object",
        "properties": {
            "r": {"type": "integer"},
            "a": {"type": "integer"},
            "chi": {"type": "integer"},
        },
        "required": ["r", "a", "chi"],
        "additionalProperties": False,
    },
    "fujiki": {
        "type": "object",
        "properties": {
            "n": {"type": "integer"},
            "l2": _RATIONAL,
            "lx": _RATIONAL,
            "x2": _RATIONAL,
        },
        "required": ["n", "l2", "lx", "x2"],
        "additionalProperties": False,
    },
    "report": {
        "type": "object",
        "properties": {
            "results": {"type": "array", "items": {"type": "object"}, "minItems": 1},
            "format": {"enum": ["table", "csv"]},
        },
        "required": ["results"],
        "additionalProperties": False,
    },
}

JOB_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "job",
    "type": "object",
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "surface": {"$ref": "#/$defs/surface"},
        "inputs": {"type": "object"},
    },
    "required": ["command", "surface", "inputs"],
    "additionalProperties": False,
    "$defs": {
        "surface": {
            key: val for key, val in SURFACE_SCHEMA.items() if key != "$schema"
        },
        "vector": {
            key: val for key, val in VECTOR_SCHEMA.items() if key != "$schema"
        },
    },
}


def input_schema(command: str) -> dict:
    """Self-contained schema for one command's inputs block."""
    body = {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "inputs-" + command,
    }
    body.update(INPUT_SCHEMAS[command])
    body["$defs"] = {"vector": JOB_SCHEMA["$defs"]["vector"]}
    return body


def schema_texts() -> dict:
    """Pretty JSON for each published schema file, keyed by file name."""
    texts = {
        "surface.schema.json": SURFACE_SCHEMA,
        "vector.schema.json": VECTOR_SCHEMA,
        "job.schema.json": JOB_SCHEMA,
    }
    for command in INPUT_SCHEMAS:
        texts["inputs-%s.schema.json" % command] = input_schema(command)
    return {
        name: json.dumps(schema, indent=2, sort_keys=True) + "\n"
        for name, schema in texts.items()
    }
