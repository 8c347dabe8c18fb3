#include "nicadil/scenario.hpp"

namespace nicadil {

// Canonical schema documents. The copies under schemas/ carry the same bytes;
// a unit test keeps them in sync.

std::string scenario_schema_text() {
    return R"SCHEMA({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "$id": "nicadil/scenario.schema.json",
  "title": "nicadil scenario",
  "type": "object",
  "required": ["factors", "tasks"],
  "properties": {
    "version": { "type": "integer" },
    "seed": { "type": "integer", "minimum": 0 },
    "depth": { "type": "integer", "minimum": 0 },
    "tolerances": {
      "type": "object",
      "properties": {
        "tol": { "type": "number" },
        "tol_psd": { "type": "number" }
      }
    },
    "caps": {
      "type": "object",
      "properties": {
        "max_gram_dim": { "type": "integer", "minimum": 1 },
        "max_grid": { "type": "integer", "minimum": 1 }
      }
    },
    "factors": {
      "type": "array",
      "minItems": 1,
      "items": {
        "type": "object",
        "required": ["kind", "generators"],
        "properties": {
          "kind": { "enum": ["cyclic", "real"] },
          "generators": {
            "type": "array",
            "minItems": 1,
            "items": { "type": "string", "description": "exact rational 'p/q' or decimal string" }
          },
          "label": { "type": "string" },
          "radius": { "type": "string", "description": "uncertainty half-width for real factors" }
        }
      }
    },
    "representation": { "$ref": "#/definitions/representation" },
    "covariant_pair": {
      "type": "object",
      "required": ["system", "sigma", "rep"],
      "properties": {
        "system": {
          "type": "object",
          "required": ["dim", "action"],
          "properties": {
            "dim": { "type": "integer", "minimum": 1 },
            "algebra": { "enum": ["full"] },
            "action": {
              "type": "array",
              "items": { "type": "array", "items": { "$ref": "#/definitions/matrix" } }
            }
          }
        },
        "sigma": {
          "type": "object",
          "properties": {
            "multiplicity": { "type": "integer", "minimum": 1 },
            "images": { "type": "array", "items": { "$ref": "#/definitions/matrix" } }
          }
        },
        "rep": { "$ref": "#/definitions/representation" }
      }
    },
    "tasks": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["type"],
        "properties": {
          "type": {
            "enum": ["kernel_check", "dilate", "verify", "schur_check", "induced",
                     "norm_estimate", "gauge"]
          },
          "points": { "type": "array", "items": { "$ref": "#/definitions/element" } },
          "factorization": { "type": "boolean" },
          "depth": { "type": "integer", "minimum": 0 },
          "depth_b": { "type": "integer", "minimum": 0 },
          "support": { "type": "array", "items": { "$ref": "#/definitions/element" } },
          "check": { "enum": ["isometry", "regularity", "nica", "uniqueness"] },
          "s": { "$ref": "#/definitions/element" },
          "g": { "$ref": "#/definitions/element" },
          "t": { "$ref": "#/definitions/element" },
          "mu": { "$ref": "#/definitions/element" },
          "nu": { "$ref": "#/definitions/element" },
          "max_pairs": { "type": "integer", "minimum": 1 },
          "m": { "type": "integer", "minimum": 1 },
          "block_dim": { "type": "integer", "minimum": 1 },
          "trials": { "type": "integer", "minimum": 1 },
          "polynomial": { "$ref": "#/definitions/polynomial" },
          "samples": { "type": "integer", "minimum": 1 },
          "multiplicity_cap": { "type": "integer", "minimum": 1 },
          "characters": { "type": "integer", "minimum": 1 },
          "thetas": {
            "type": "array",
            "items": { "type": "array", "items": { "type": "array", "items": { "type": "number" } } }
          },
          "tolerance": { "type": "number" }
        }
      }
    }
  },
  "definitions": {
    "complex": {
      "oneOf": [
        { "type": "number" },
        { "type": "array", "items": { "type": "number" }, "minItems": 2, "maxItems": 2 }
      ]
    },
    "matrix": {
      "type": "array",
      "minItems": 1,
      "items": { "type": "array", "minItems": 1, "items": { "$ref": "#/definitions/complex" } }
    },
    "element": {
      "description": "one integer coefficient array per factor",
      "type": "array",
      "items": { "type": "array", "items": { "type": "integer" } }
    },
    "polynomial": {
      "type": "array",
      "minItems": 1,
      "items": {
        "type": "object",
        "required": ["s", "coeff"],
        "properties": {
          "s": { "$ref": "#/definitions/element" },
          "coeff": { "$ref": "#/definitions/matrix" }
        }
      }
    },
    "representation": {
      "type": "object",
      "required": ["mode"],
      "properties": {
        "mode": { "enum": ["tensor", "direct"] },
        "tolerance": { "type": "number" },
        "legs": {
          "type": "array",
          "items": { "type": "array", "items": { "$ref": "#/definitions/matrix" } }
        },
        "generators": {
          "type": "array",
          "items": { "type": "array", "items": { "$ref": "#/definitions/matrix" } }
        }
      }
    }
  }
}
)SCHEMA";
}

std::string report_schema_text() {
    return R"SCHEMA({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "$id": "nicadil/report.schema.json",
  "title": "nicadil verification report",
  "type": "object",
  "required": ["tool", "version", "verdict"],
  "properties": {
    "tool": { "const": "nicadil" },
    "version": { "type": "string" },
    "schema_version": { "type": "integer" },
    "environment": {
      "type": "object",
      "properties": {
        "seed": { "type": "integer" },
        "depth": { "type": "integer" },
        "tolerances": { "type": "object" },
        "caps": { "type": "object" }
      }
    },
    "setup": { "type": "object" },
    "setup_error": { "$ref": "#/definitions/error" },
    "schema_error": { "type": "string" },
    "tasks": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "index", "parameters", "verdict", "wall_ms"],
        "properties": {
          "name": { "type": "string" },
          "index": { "type": "integer" },
          "parameters": { "type": "object" },
          "verdict": { "enum": ["pass", "fail", "error"] },
          "wall_ms": { "type": "number" },
          "error": { "$ref": "#/definitions/error" }
        }
      }
    },
    "verdict": { "enum": ["pass", "fail", "error"] }
  },
  "definitions": {
    "error": {
      "type": "object",
      "required": ["code", "message"],
      "properties": {
        "code": { "type": "string" },
        "message": { "type": "string" }
      }
    }
  }
}
)SCHEMA";
}

} // namespace nicadil
