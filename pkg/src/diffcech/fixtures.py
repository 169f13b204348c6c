"""Built-in presentations and groups, also shipped as JSON under data/."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import MalformedInputError
from .site import PlotPresentation, build_presentation_from_complex, presentation_from_json

PRESENTATIONS = ("PT", "DISC2", "CIRC2", "CIRC4", "SPH-OCT")
GROUPS = ("Z2", "Z3", "S3")


def _probe(pid, vertices, edges, to_space=None):
    return {"id": pid, "vertices": list(vertices), "edges": [list(e) for e in edges],
            "to_space": dict(to_space) if to_space else {v: v for v in vertices}}


def _map(mid, src, tgt, vmap):
    return {"id": mid, "from": src, "to": tgt, "vertex_map": dict(vmap)}


def pt_json() -> dict:
    return {"points": ["x"], "probes": [_probe("P", ["x"], [])], "maps": []}


def disc2_json() -> dict:
    return {"points": ["a", "b"],
            "probes": [_probe("Pa", ["a"], []), _probe("Pb", ["b"], [])], "maps": []}


def circ2_json() -> dict:
    """Circle on four points covered by two arcs meeting at 0 and 2."""
    pts = ["0", "1", "2", "3"]
    probes = [_probe("U", ["0", "1", "2"], [("0", "1"), ("1", "2")]),
              _probe("V", ["2", "3", "0"], [("2", "3"), ("3", "0")]),
              _probe("P0", ["0"], []), _probe("P2", ["2"], [])]
    maps = [_map("i0U", "P0", "U", {"0": "0"}), _map("i0V", "P0", "V", {"0": "0"}),
            _map("i2U", "P2", "U", {"2": "2"}), _map("i2V", "P2", "V", {"2": "2"})]
    return {"points": pts, "probes": probes, "maps": maps}


def circ4_json() -> dict:
    """Circle on four points covered by four edges and their endpoints."""
    pts = ["0", "1", "2", "3"]
    probes, maps = [], []
    for i in range(4):
        a, b = str(i), str((i + 1) % 4)
        probes.append(_probe(f"A{i}", [a, b], [(a, b)]))
    for i in range(4):
        probes.append(_probe(f"P{i}", [str(i)], []))
    for i in range(4):
        a, b = str(i), str((i + 1) % 4)
        maps.append(_map(f"l{i}", f"P{i}", f"A{i}", {a: a}))
        maps.append(_map(f"r{i}", f"P{(i + 1) % 4}", f"A{i}", {b: b}))
    return {"points": pts, "probes": probes, "maps": maps}


OCTAHEDRON = [(a, b, c) for a in ("n", "s") for b in ("x", "X") for c in ("y", "Y")]


def sph_oct_json() -> dict:
    return build_presentation_from_complex(OCTAHEDRON, "SPH-OCT").to_json()


BUILDERS = {"PT": pt_json, "DISC2": disc2_json, "CIRC2": circ2_json, "CIRC4": circ4_json,
            "SPH-OCT": sph_oct_json}

GROUP_JSON = {"Z2": {"cyclic": 2}, "Z3": {"cyclic": 3}, "S3": {"symmetric": 3}}


def _data_file(name: str):
    return resources.files("diffcech").joinpath("data", name)


def fixture(name: str) -> PlotPresentation:
    key = name.upper()
    if key not in BUILDERS:
        raise MalformedInputError(f"unknown fixture {name!r}; choose from {', '.join(PRESENTATIONS)}")
    f = _data_file(f"{key}.json")
    data = json.loads(f.read_text(encoding="utf-8")) if f.is_file() else BUILDERS[key]()
    return presentation_from_json(data, key)


def group_fixture(name: str) -> dict:
    key = name.upper()
    if key not in GROUP_JSON:
        raise MalformedInputError(f"unknown group {name!r}; choose from {', '.join(GROUPS)}")
    return dict(GROUP_JSON[key])


def write_fixtures(directory) -> list[Path]:
    """Write every built-in presentation and group as JSON; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for key, build in BUILDERS.items():
        path = directory / f"{key}.json"
        path.write_text(presentation_from_json(build(), key).dumps(), encoding="utf-8")
        out.append(path)
    for key, data in GROUP_JSON.items():
        path = directory / f"group-{key}.json"
        path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        out.append(path)
    return out
