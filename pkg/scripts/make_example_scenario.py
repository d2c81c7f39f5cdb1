#!/usr/bin/env python3
"""Emit a ready-to-run scenario JSON for the upper-triangular 2x2 example:
the inclusion and diagonal-augmented covers, the sign action, and a handful
of checks with frozen expectations.

Usage: python scripts/make_example_scenario.py > t2.json
       opalg run t2.json
"""

import json
import sys

import numpy as np

from opalg.serialize import mat_to_json


def build():
    e11 = np.diag([1.0, 0.0]).astype(complex)
    e22 = np.diag([0.0, 1.0]).astype(complex)
    e12 = np.zeros((2, 2), dtype=complex)
    e12[0, 1] = 1.0
    basis = [e11, e22, e12]

    def diag_img(a):
        out = np.zeros((4, 4), dtype=complex)
        out[:2, :2] = a
        out[2:, 2:] = np.diag(np.diag(a))
        return out

    return {
        "ambients": {"M2": [2], "M2pC2": [2, 2]},
        "algebras": {"T2": {"ambient": "M2",
                            "basis": [mat_to_json(m) for m in basis]}},
        "covers": {
            "inc": {"algebra": "T2", "ambient": "M2",
                    "j": [mat_to_json(m) for m in basis]},
            "diag": {"algebra": "T2", "ambient": "M2pC2",
                     "j": [mat_to_json(diag_img(m)) for m in basis]},
        },
        "group": {"table": [[0, 1], [1, 0]]},
        "systems": {
            "sign": {"algebra": "T2",
                     "action": {"type": "ad",
                                "unitaries": [
                                    mat_to_json(np.eye(2, dtype=complex)),
                                    mat_to_json(np.diag([1.0, -1.0])
                                                .astype(complex))]}},
        },
        "checks": [
            {"op": "structure", "cover": "diag",
             "expect": {"dim": 6, "blocks": [2, 1, 1]}},
            {"op": "shilov", "cover": "diag",
             "expect": {"shilov_block_dims": [1, 1], "essential": False}},
            {"op": "envelope", "cover": "diag",
             "expect": {"dim": 4, "blocks": [2]}},
            {"op": "order", "upper": "diag", "lower": "inc",
             "expect": {"verdict": "Morphism"}},
            {"op": "admissible", "system": "sign", "cover": "diag",
             "expect": {"verdict": "Admissible"}},
            {"op": "inner", "system": "sign",
             "expect": {"found": True, "exact_group_law": True}},
            {"op": "crossed", "system": "sign", "expect": {"dim": 6}},
            {"op": "partial", "system": "sign", "cover": "diag",
             "expect": {"verified": True, "subalgebra_dim": 6}},
        ],
    }


if __name__ == "__main__":
    json.dump(build(), sys.stdout, indent=2)
    print()
