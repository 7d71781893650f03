"""
Named Cartan matrices and the text/JSON input forms.

Text form: rows separated by ';', entries by ',' (e.g. "2,-2,0;-2,2,-1;0,-1,2").
JSON form: {"matrix": [[...], ...]}.
Presets: F, E8, E9, E10, E11, A1_1 and A1(a,b).
"""

import json
import re

from cartan import GCM, extend, overextend, validate_gcm
from config import get_logger
from exceptions import ParseError

logger = get_logger(__name__)

# Over-extended A1: the rank 3 hyperbolic algebra with level carried by vertex 2
F_MATRIX = [[2, -2, 0], [-2, 2, -1], [0, -1, 2]]

# Bourbaki labelling: chain 1-3-4-5-6-7-8 with vertex 2 attached to 4
E8_EDGES = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]

# Index of the level-carrying (over-extending) vertex per preset
LEVEL_NODES = {"F": 2, "E10": 0, "E11": 0}


def e8() -> GCM:
    rows = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in E8_EDGES:
        rows[i - 1][j - 1] = -1
        rows[j - 1][i - 1] = -1
    return validate_gcm(rows, name="E8")


def e9() -> GCM:
    g = extend(e8())
    return validate_gcm(g.a, name="E9")


def e10() -> GCM:
    g = overextend(e9())
    return validate_gcm(g.a, name="E10")


def e11() -> GCM:
    # The new vertex joins the over-extending vertex of E10 (index 0)
    g = extend(e10(), attach=0)
    return validate_gcm(g.a, name="E11")


def rank2(a: int, b: int) -> GCM:
    return validate_gcm([[2, -a], [-b, 2]], name=f"A1({a},{b})")


PRESETS = {
    "F": lambda: validate_gcm(F_MATRIX, name="F"),
    "E8": e8,
    "E9": e9,
    "E10": e10,
    "E11": e11,
    "A1_1": lambda: validate_gcm([[2, -2], [-2, 2]], name="A1_1"),
}

_RANK2_PATTERN = re.compile(r"^A1\(\s*(\d+)\s*,\s*(\d+)\s*\)$")


def preset(name: str) -> GCM:
    """Look up a named matrix."""
    key = name.strip()
    match = _RANK2_PATTERN.match(key)
    if match:
        return rank2(int(match.group(1)), int(match.group(2)))
    if key.upper() in PRESETS:
        return PRESETS[key.upper()]()
    raise ParseError(f"Unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}, A1(a,b)")


def parse_matrix_text(text: str) -> GCM:
    """Parse the 'r1;r2' text form or the JSON {"matrix": ...} form."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            payload = json.loads(stripped)
            rows = payload["matrix"]
        except (ValueError, KeyError, TypeError) as e:
            raise ParseError(f"Invalid JSON matrix: {e}")
        return validate_gcm(rows)

    try:
        rows = [[int(entry) for entry in row.split(",")] for row in stripped.split(";") if row.strip()]
    except ValueError as e:
        raise ParseError(f"Invalid matrix text {text!r}: {e}")
    if not rows:
        raise ParseError("Empty matrix text")
    return validate_gcm(rows)


def resolve_gcm(matrix_text=None, preset_name=None) -> GCM:
    """Resolve a CLI matrix argument or --preset value into a GCM."""
    if preset_name:
        return preset(preset_name)
    if matrix_text:
        return parse_matrix_text(matrix_text)
    raise ParseError("Provide a matrix or --preset")


def level_node(g: GCM):
    """Vertex index carrying the level for presets that have one, else None."""
    return LEVEL_NODES.get(g.name) if g.name else None
