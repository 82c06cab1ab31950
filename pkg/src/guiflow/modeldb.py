"""On-disk analysis store: static universe, event-flow graph, records, shots.

The database is a plain directory of canonical JSON plus PPM files, so two
runs over the same bundle are byte-for-byte comparable and the whole store
is relocatable. Loading re-validates every cross-reference.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass
from pathlib import Path

from .errors import RefIntegrityError, SchemaError
from .jsonio import read_json, write_canonical
from .ripper import DynamicRecord, Edge, EventFlowGraph, Target, Terminal
from .simulator import Fingerprint, fnv1a32
from .universe import StaticComponentRecord, StaticUniverse

META_KEYS = ("app_id", "created_utc", "tool_version", "truncated", "version")

# Fixed default so that identical analysis inputs produce identical bytes;
# callers wanting a real wall-clock stamp pass their own.
EPOCH_UTC = "1970-01-01T00:00:00Z"


@dataclass
class ModelDb:
    db_dir: Path
    meta: dict
    universe: StaticUniverse
    graph: EventFlowGraph

    def __post_init__(self):
        self._records = {(e.source.canonical, e.component): e.record for e in self.graph.edges}

    @property
    def app_id(self) -> str:
        return self.meta["app_id"]

    @property
    def version(self) -> str:
        return self.meta["version"]

    def screenshot_path(self, ref: str) -> Path:
        return self.db_dir / ref

    def read_screenshot(self, ref: str) -> bytes:
        return self.screenshot_path(ref).read_bytes()

    def dynamic_records(self, activity: str, component: str) -> list[DynamicRecord]:
        found = [r for r in self._records.values() if r.activity == activity and r.component == component]
        return sorted(found, key=lambda r: r.state.canonical)


@dataclass
class MergedComponentView:
    static: StaticComponentRecord
    dynamic: list[DynamicRecord]


def make_meta(app_id: str, version: str, truncated: bool, tool_version: str,
              created_utc: str = EPOCH_UTC) -> dict:
    return {
        "app_id": app_id,
        "created_utc": created_utc,
        "tool_version": tool_version,
        "truncated": truncated,
        "version": version,
    }


def _source_ref_json(ref: tuple[str, int]) -> dict:
    return {"file": ref[0], "line": ref[1]}


def _target_json(target: Target) -> dict:
    if isinstance(target, Terminal):
        out = {"kind": target.kind}
        if target.message is not None:
            out["message"] = target.message
        return out
    return {"canonical": target.canonical, "kind": "state"}


def _universe_json(universe: StaticUniverse) -> dict:
    return {
        "app_id": universe.app_id,
        "records": [
            {
                "activity": r.activity,
                "component": r.component,
                "ctype": r.ctype,
                "declared_text": r.declared_text,
                "layout_source": _source_ref_json(r.layout_source),
                "possible_actions": list(r.possible_actions),
                "referencing_class_files": [_source_ref_json(ref) for ref in r.referencing_class_files],
            }
            for r in universe.records
        ],
        "version": universe.version,
    }


def _graph_json(graph: EventFlowGraph) -> dict:
    return {
        "discovery_paths": {
            fp.canonical: [{"action": a, "component": c} for c, a in path]
            for fp, path in graph.discovery_paths.items()
        },
        "edges": [
            {
                "action": e.action,
                "component": e.component,
                "source": e.source.canonical,
                "target": _target_json(e.target),
            }
            for e in graph.edges
        ],
        "launch_state": graph.launch_state.canonical,
        "states": [
            {"canonical": fp.canonical, "short_id": fp.short_id}
            for fp in graph.sorted_states()
        ],
    }


def _records_json(graph: EventFlowGraph) -> list[dict]:
    records = {(e.source.canonical, e.component): e.record for e in graph.edges}
    return [
        {
            "activity": r.activity,
            "bounds": list(r.bounds),
            "component": r.component,
            "contextual_screenshot": r.contextual_screenshot,
            "effective_text": r.effective_text,
            "full_screenshot": r.full_screenshot,
            "state": r.state.canonical,
        }
        for _, r in sorted(records.items())
    ]


def save(db_dir: str | Path, universe: StaticUniverse, graph: EventFlowGraph, meta: dict) -> None:
    """Write the full store; output bytes depend only on the inputs."""
    for record in (e.record for e in graph.edges):
        for ref in (record.full_screenshot, record.contextual_screenshot):
            if ref not in graph.shots:
                raise RefIntegrityError(f"no screenshot bytes for {ref}")

    root = Path(db_dir)
    root.mkdir(parents=True, exist_ok=True)
    shots_dir = root / "shots"
    if shots_dir.exists():
        shutil.rmtree(shots_dir)
    shots_dir.mkdir()

    write_canonical(root / "meta.json", {k: meta[k] for k in META_KEYS})
    write_canonical(root / "universe.json", _universe_json(universe))
    write_canonical(root / "graph.json", _graph_json(graph))
    write_canonical(root / "records.json", _records_json(graph))
    for ref in sorted(graph.shots):
        (root / ref).write_bytes(graph.shots[ref])


def _require(condition: bool, file: str, detail: str) -> None:
    if not condition:
        raise SchemaError(file, detail)


def _load_source_ref(obj, file: str) -> tuple[str, int]:
    _require(isinstance(obj, dict) and isinstance(obj.get("file"), str)
             and isinstance(obj.get("line"), int), file, "malformed source reference")
    return (obj["file"], obj["line"])


def _load_meta(root: Path) -> dict:
    meta = read_json(root / "meta.json", "meta.json")
    _require(isinstance(meta, dict), "meta.json", "expected an object")
    for key in META_KEYS:
        _require(key in meta, "meta.json", f"missing key {key!r}")
    _require(isinstance(meta["truncated"], bool), "meta.json", "truncated must be a bool")
    for key in ("app_id", "created_utc", "tool_version", "version"):
        _require(isinstance(meta[key], str), "meta.json", f"{key} must be a string")
    return {k: meta[k] for k in META_KEYS}


def _load_universe(root: Path) -> StaticUniverse:
    data = read_json(root / "universe.json", "universe.json")
    _require(isinstance(data, dict) and isinstance(data.get("records"), list),
             "universe.json", "expected an object with a records list")
    records = []
    for entry in data["records"]:
        _require(isinstance(entry, dict), "universe.json", "record entries must be objects")
        for key in ("activity", "component", "ctype", "declared_text"):
            _require(isinstance(entry.get(key), str), "universe.json", f"record {key} must be a string")
        actions = entry.get("possible_actions")
        _require(isinstance(actions, list) and actions and all(isinstance(a, str) for a in actions),
                 "universe.json", "possible_actions must be a non-empty string list")
        records.append(StaticComponentRecord(
            activity=entry["activity"],
            component=entry["component"],
            ctype=entry["ctype"],
            possible_actions=tuple(actions),
            declared_text=entry["declared_text"],
            layout_source=_load_source_ref(entry.get("layout_source"), "universe.json"),
            referencing_class_files=tuple(
                _load_source_ref(ref, "universe.json")
                for ref in entry.get("referencing_class_files", [])
            ),
        ))
    return StaticUniverse(app_id=data.get("app_id", ""), version=data.get("version", ""),
                          records=tuple(records))


def _load_target(obj, states: dict[str, Fingerprint]) -> Target:
    _require(isinstance(obj, dict), "graph.json", "edge target must be an object")
    kind = obj.get("kind")
    if kind == "state":
        canonical = obj.get("canonical")
        _require(canonical in states, "graph.json", f"edge target {canonical!r} is not a known state")
        return states[canonical]
    if kind == "crashed":
        _require(isinstance(obj.get("message"), str), "graph.json", "crashed target needs a message")
        return Terminal(kind="crashed", message=obj["message"])
    if kind == "exited":
        return Terminal(kind="exited")
    raise SchemaError("graph.json", f"unknown target kind {kind!r}")


def _load_graph(root: Path, truncated: bool) -> EventFlowGraph:
    data = read_json(root / "graph.json", "graph.json")
    _require(isinstance(data, dict), "graph.json", "expected an object")
    for key in ("states", "edges", "launch_state", "discovery_paths"):
        _require(key in data, "graph.json", f"missing key {key!r}")

    states: dict[str, Fingerprint] = {}
    for entry in data["states"]:
        _require(isinstance(entry, dict) and isinstance(entry.get("canonical"), str),
                 "graph.json", "state entries need a canonical string")
        canonical = entry["canonical"]
        _require(entry.get("short_id") == fnv1a32(canonical),
                 "graph.json", f"short_id mismatch for state {entry.get('short_id')!r}")
        _require(canonical not in states, "graph.json", "duplicate state canonical")
        states[canonical] = Fingerprint(canonical=canonical, short_id=entry["short_id"])

    launch_canonical = data["launch_state"]
    _require(launch_canonical in states, "graph.json", "launch_state is not a known state")

    record_index = _load_records(root, states)

    edges: list[Edge] = []
    seen: set[tuple[str, str, str]] = set()
    targeted: set[str] = set()
    for entry in data["edges"]:
        _require(isinstance(entry, dict), "graph.json", "edge entries must be objects")
        source = entry.get("source")
        component = entry.get("component")
        action = entry.get("action")
        _require(source in states, "graph.json", f"edge source {source!r} is not a known state")
        _require(isinstance(component, str) and isinstance(action, str),
                 "graph.json", "edge component/action must be strings")
        key = (source, component, action)
        _require(key not in seen, "graph.json", f"duplicate edge {key}")
        seen.add(key)
        target = _load_target(entry.get("target"), states)
        record = record_index.get((source, component))
        _require(record is not None, "graph.json", f"no dynamic record for edge {key}")
        if isinstance(target, Fingerprint):
            targeted.add(target.canonical)
        edges.append(Edge(source=states[source], component=component, action=action,
                          target=target, record=record))

    for canonical in states:
        _require(canonical == launch_canonical or canonical in targeted,
                 "graph.json", f"state {states[canonical].short_id} is unreachable by edges")

    paths: dict[Fingerprint, tuple[tuple[str, str], ...]] = {}
    _require(isinstance(data["discovery_paths"], dict), "graph.json", "discovery_paths must be an object")
    for canonical, steps in data["discovery_paths"].items():
        _require(canonical in states, "graph.json", "discovery path for unknown state")
        _require(isinstance(steps, list), "graph.json", "discovery path must be a list")
        path = []
        for step in steps:
            _require(isinstance(step, dict) and isinstance(step.get("component"), str)
                     and isinstance(step.get("action"), str),
                     "graph.json", "discovery path steps need component and action")
            path.append((step["component"], step["action"]))
        paths[states[canonical]] = tuple(path)
    _require(set(paths) == set(states.values()), "graph.json", "discovery_paths must cover every state")

    extra_records = set(record_index) - {(e.source.canonical, e.component) for e in edges}
    _require(not extra_records, "records.json", f"{len(extra_records)} records match no edge")

    return EventFlowGraph(
        launch_state=states[launch_canonical],
        states=states,
        edges=tuple(edges),
        discovery_paths=paths,
        truncated=truncated,
        shots={},
    )


def _load_records(root: Path, states: dict[str, Fingerprint]) -> dict[tuple[str, str], DynamicRecord]:
    data = read_json(root / "records.json", "records.json")
    _require(isinstance(data, list), "records.json", "expected a list")
    index: dict[tuple[str, str], DynamicRecord] = {}
    for entry in data:
        _require(isinstance(entry, dict), "records.json", "record entries must be objects")
        for key in ("activity", "component", "effective_text", "full_screenshot",
                    "contextual_screenshot", "state"):
            _require(isinstance(entry.get(key), str), "records.json", f"record {key} must be a string")
        bounds = entry.get("bounds")
        _require(isinstance(bounds, list) and len(bounds) == 4 and all(isinstance(v, int) for v in bounds),
                 "records.json", "bounds must be four integers")
        _require(entry["state"] in states, "records.json", "record references unknown state")
        key = (entry["state"], entry["component"])
        _require(key not in index, "records.json", f"duplicate record for {key}")
        index[key] = DynamicRecord(
            activity=entry["activity"],
            component=entry["component"],
            effective_text=entry["effective_text"],
            bounds=tuple(bounds),
            full_screenshot=entry["full_screenshot"],
            contextual_screenshot=entry["contextual_screenshot"],
            state=states[entry["state"]],
        )
    return index


def load(db_dir: str | Path) -> ModelDb:
    """Load and re-validate a saved store."""
    root = Path(db_dir)
    meta = _load_meta(root)
    universe = _load_universe(root)
    _require(universe.app_id == meta["app_id"] and universe.version == meta["version"],
             "universe.json", "app_id/version disagree with meta.json")
    graph = _load_graph(root, truncated=meta["truncated"])

    for edge in graph.edges:
        record = edge.record
        if not universe.has(record.activity, record.component):
            raise SchemaError("records.json",
                              f"record {record.activity}.{record.component} is not in the universe")
        for ref in (record.full_screenshot, record.contextual_screenshot):
            if not (root / ref).is_file():
                raise RefIntegrityError(f"{ref} does not resolve inside {root}")

    return ModelDb(db_dir=root, meta=meta, universe=universe, graph=graph)


def query_component(db: ModelDb, activity: str, component: str) -> MergedComponentView:
    """Join the static record with every dynamic record observed for it."""
    static = db.universe.record(activity, component)  # raises UnknownComponent
    return MergedComponentView(static=static, dynamic=db.dynamic_records(activity, component))
