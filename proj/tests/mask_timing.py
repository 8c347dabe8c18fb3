#!/usr/bin/env python3
"""Print a report with every wall_ms value replaced by 0 (for byte comparison)."""

import json
import sys


def scrub(node):
    if isinstance(node, dict):
        return {k: (0 if k == "wall_ms" else scrub(v)) for k, v in node.items()}
    if isinstance(node, list):
        return [scrub(v) for v in node]
    return node


with open(sys.argv[1]) as handle:
    print(json.dumps(scrub(json.load(handle)), indent=2))
