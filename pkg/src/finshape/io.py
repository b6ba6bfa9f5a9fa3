"""JSON file formats for posets, maps, point clouds and sequence manifests."""
from __future__ import annotations

import json
import os
from pathlib import Path

from .approximation import EpsilonSchedule, FiniteApproximation
from .errors import InputError
from .metric import FiniteMetricSpace
from .poset import FinitePoset, MonotoneMap
from .sequences import InverseSequence


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from None


def write_json(path, obj):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    return v


def poset_to_dict(X: FinitePoset) -> dict:
    elements = []
    for x in X.ids:
        e = {"id": x}
        if x in X.labels:
            e["label"] = _jsonable(X.labels[x])
        elements.append(e)
    return {"elements": elements, "covers": [list(c) for c in X.covers]}


def poset_from_dict(d: dict) -> FinitePoset:
    try:
        elems = d["elements"]
    except (KeyError, TypeError):
        raise InputError("poset JSON needs an 'elements' list") from None
    ids, labels = [], {}
    for e in elems:
        if isinstance(e, dict):
            if "id" not in e:
                raise InputError("poset element without 'id'")
            ids.append(str(e["id"]))
            if "label" in e:
                labels[str(e["id"])] = e["label"]
        else:
            ids.append(str(e))
    rel = d.get("covers", d.get("relations", []))
    for pair in rel:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise InputError(f"bad cover pair {pair!r}")
    return FinitePoset(ids, [tuple(p) for p in rel], labels)


def load_poset(path) -> FinitePoset:
    return poset_from_dict(read_json(path))


def map_to_dict(f: MonotoneMap, source_ref=None, target_ref=None) -> dict:
    return {
        "source": source_ref if source_ref is not None else poset_to_dict(f.source),
        "target": target_ref if target_ref is not None else poset_to_dict(f.target),
        "assignment": dict(f.assignment),
    }


def _poset_ref(ref, base: Path, cache):
    if isinstance(ref, dict):
        return poset_from_dict(ref)
    if isinstance(ref, str):
        p = (base / ref).resolve()
        if p not in cache:
            cache[p] = load_poset(p)
        return cache[p]
    raise InputError("map source/target must be a file reference or an inline poset")


def map_from_dict(d: dict, base=".", cache=None) -> MonotoneMap:
    cache = {} if cache is None else cache
    base = Path(base)
    for k in ("source", "target", "assignment"):
        if k not in d:
            raise InputError(f"map JSON needs {k!r}")
    S = _poset_ref(d["source"], base, cache)
    T = _poset_ref(d["target"], base, cache)
    return MonotoneMap(S, T, d["assignment"])


def load_map(path, cache=None) -> MonotoneMap:
    return map_from_dict(read_json(path), Path(path).parent, cache)


def cloud_to_dict(M: FiniteMetricSpace, **extra) -> dict:
    if M.matrix is not None:
        d = {"matrix": M.matrix.tolist()}
    else:
        d = {"dim": M.dim, "points": [M.point_json(i) for i in range(len(M))]}
    d.update(extra)
    return d


def cloud_from_dict(d: dict, tolerance=1e-12) -> FiniteMetricSpace:
    if "matrix" in d:
        return FiniteMetricSpace(matrix=d["matrix"], tolerance=tolerance)
    if "points" not in d:
        raise InputError("point-cloud JSON needs 'points' or 'matrix'")
    M = FiniteMetricSpace(d["points"], tolerance=tolerance)
    if "dim" in d and d["dim"] != M.dim:
        raise InputError(f"declared dim {d['dim']} does not match points of dim {M.dim}")
    return M


# sequence manifests

def write_sequence(S: InverseSequence, out_dir, schedule: EpsilonSchedule | None = None,
                   extra: dict | None = None, names=("stage", "bond")) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stage_files, bond_files = [], []
    for n, X in enumerate(S.stages, 1):
        fn = f"{names[0]}_{n}.json"
        write_json(out / fn, poset_to_dict(X))
        stage_files.append(fn)
    for n, t in enumerate(S.bonds, 1):
        fn = f"{names[1]}_{n}.json"
        write_json(out / fn, map_to_dict(t, stage_files[n], stage_files[n - 1]))
        bond_files.append(fn)
    manifest = {"stages": stage_files, "bonds": bond_files}
    if schedule is not None:
        manifest["schedule"] = schedule.to_dict()
        manifest["variant"] = schedule.variant
    if extra:
        manifest.update(extra)
    write_json(out / "manifest.json", manifest)
    return out / "manifest.json"


def write_approximation(FA: FiniteApproximation, out_dir) -> Path:
    return write_sequence(FA.sequence(), out_dir, FA.schedule,
                          {"samples": [list(a) for a in FA.samples]})


def load_sequence(manifest_path) -> tuple[InverseSequence, dict]:
    path = Path(manifest_path)
    if path.is_dir():
        path = path / "manifest.json"
    m = read_json(path)
    base = path.parent
    if "stages" not in m:
        raise InputError("manifest needs 'stages'")
    cache = {}
    stages = [_poset_ref(s, base, cache) for s in m["stages"]]
    bonds = []
    for n, b in enumerate(m.get("bonds", [])):
        d = read_json(base / b) if isinstance(b, str) else b
        bbase = (base / b).parent if isinstance(b, str) else base
        f = map_from_dict(d, bbase, cache)
        # rebind to the shared stage objects
        bonds.append(MonotoneMap(stages[n + 1], stages[n], f.assignment))
    return InverseSequence(stages, bonds), m


def relpath(p, start) -> str:
    return os.path.relpath(p, start)
