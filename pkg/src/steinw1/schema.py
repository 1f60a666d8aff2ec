"""Published JSON schemas for the machine-readable CLI outputs."""

_NUMBER_OR_NULL = {"type": ["number", "null"]}

LAW_SCHEMA = {
    "type": "object",
    "required": ["family", "params", "points", "masses", "truncation"],
    "properties": {
        "family": {"type": "string"},
        "params": {"type": "object"},
        "points": {"type": "array", "items": {"type": "number"}},
        "masses": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "truncation": {
            "type": ["object", "null"],
            "properties": {
                "cut_index": {"type": "integer"},
                "tail_mass": {"type": "number"},
                "tail_first_moment": {"type": "number"},
                "next_gap": {"type": "number"},
            },
        },
    },
}

WEIGHTS_SCHEMA = {
    "type": "object",
    "required": ["points", "masses", "weights", "in_unit_interval", "source"],
    "properties": {
        "points": {"type": "array", "items": {"type": "number"}},
        "masses": {"type": "array", "items": {"type": "number"}},
        "weights": {"type": "array", "items": {"type": "number"}},
        "in_unit_interval": {"type": "boolean"},
        "max_residual": _NUMBER_OR_NULL,
        "source": {
            "enum": ["recurrence", "closed_form", "linear_solve", "clt_composition"]
        },
        "diagnostics": {"type": "object"},
    },
}

BOUND_REPORT_SCHEMA = {
    "type": "object",
    "required": ["bound", "theorem", "term_breakdown"],
    "properties": {
        "bound": {"type": "number", "minimum": 0},
        "theorem": {
            "enum": [
                "uniform_T11",
                "combined_T214",
                "refined_piecewise",
                "clt_T37",
                "regular_spacing_C12",
            ]
        },
        "term_breakdown": {
            "type": "object",
            "required": [
                "first_order",
                "second_order",
                "truncation_slack",
                "standardization_slack",
            ],
        },
        "oracle_w1": _NUMBER_OR_NULL,
        "ratio": _NUMBER_OR_NULL,
        "diagnostics": {"type": "object"},
    },
}

CATALOG_SCHEMA = {
    "type": "object",
    "additionalProperties": {
        "type": "object",
        "required": ["params", "target", "weight"],
        "properties": {
            "params": {"type": "object"},
            "target": {"type": "string"},
            "weight": {"type": "string"},
        },
    },
}

SCHEMAS = {
    "law": LAW_SCHEMA,
    "weights": WEIGHTS_SCHEMA,
    "bound_report": BOUND_REPORT_SCHEMA,
    "catalog": CATALOG_SCHEMA,
}
