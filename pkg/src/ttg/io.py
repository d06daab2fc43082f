"""JSON and DOT serialization for spaces and maps.

Output is byte-stable: points sorted by id, only covering specializations
written, keys sorted, two-space indent, trailing newline.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import TTGError
from .spaces import FiniteSpectralSpace, SpectralMap


def space_to_obj(space: FiniteSpectralSpace) -> dict:
    pts = []
    for p in sorted(space.points):
        entry = {"id": p}
        if p in space.meta:
            entry["meta"] = space.meta[p]
        pts.append(entry)
    return {"points": pts, "specializations": sorted([a, b] for a, b in space.covers())}


def space_from_obj(obj) -> FiniteSpectralSpace:
    if not isinstance(obj, dict) or "points" not in obj:
        raise TTGError("space must be an object with a 'points' list")
    ids, meta = [], {}
    for entry in obj["points"]:
        if isinstance(entry, str):
            ids.append(entry)
            continue
        if not isinstance(entry, dict) or "id" not in entry:
            raise TTGError(f"bad point entry {entry!r}")
        ids.append(str(entry["id"]))
        if "meta" in entry:
            meta[str(entry["id"])] = entry["meta"]
    specs = obj.get("specializations", [])
    for s in specs:
        if not isinstance(s, (list, tuple)) or len(s) != 2:
            raise TTGError(f"bad specialization {s!r}; expected [a, b]")
    return FiniteSpectralSpace(ids, [tuple(map(str, s)) for s in specs], meta=meta)


def map_to_obj(m: SpectralMap) -> dict:
    return {
        "domain": space_to_obj(m.domain),
        "codomain": space_to_obj(m.codomain),
        "assignment": dict(sorted(m.as_dict().items())),
    }


def map_from_obj(obj) -> SpectralMap:
    if not isinstance(obj, dict) or not {"domain", "codomain", "assignment"} <= set(obj):
        raise TTGError("map must have 'domain', 'codomain' and 'assignment'")
    if not isinstance(obj["assignment"], dict):
        raise TTGError("'assignment' must be an object")
    dom = space_from_obj(obj["domain"])
    cod = space_from_obj(obj["codomain"])
    return SpectralMap(dom, cod, {str(k): str(v) for k, v in obj["assignment"].items()})


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise TTGError(f"malformed JSON: {e}") from None


def load_map(path) -> SpectralMap:
    return map_from_obj(loads(Path(path).read_text()))


def load_space(path) -> FiniteSpectralSpace:
    return space_from_obj(loads(Path(path).read_text()))


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def space_to_dot(space: FiniteSpectralSpace, name: str = "X", cluster: bool = False) -> str:
    """Hasse diagram; edges point up toward closed points, generics at the bottom."""
    head = f"subgraph {_q('cluster_' + name)} {{" if cluster else f"digraph {_q(name)} {{"
    lines = [head]
    if cluster:
        lines.append(f"  label={_q(name)};")
    else:
        lines.append("  rankdir=BT;")
    lines.append("  node [shape=plaintext];")
    for p in sorted(space.points):
        lines.append(f"  {_q(name + ':' + p)} [label={_q(p)}];")
    for a, b in sorted(space.covers()):
        lines.append(f"  {_q(name + ':' + a)} -> {_q(name + ':' + b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def map_to_dot(m: SpectralMap, name: str = "map") -> str:
    """Domain and codomain side by side, the assignment as dashed edges."""
    body = [f"digraph {_q(name)} {{", "  rankdir=BT;", "  compound=true;"]
    for part, space in (("domain", m.domain), ("codomain", m.codomain)):
        sub = space_to_dot(space, part, cluster=True).splitlines()
        body += ["  " + s for s in sub]
    for x, y in sorted(m.as_dict().items()):
        body.append(f"  {_q('domain:' + x)} -> {_q('codomain:' + y)} [style=dashed, color=gray, constraint=false];")
    body.append("}")
    return "\n".join(body) + "\n"


def atomic_write(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over the target."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
