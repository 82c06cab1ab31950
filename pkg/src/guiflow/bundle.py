"""App-bundle description format: domain types and the line-oriented parser.

A bundle directory holds ``manifest.json``, one ``layouts/<Activity>.layout``
file per screen, and the ``src/*.logic`` files wired to them. Layout files
declare components; logic files declare tap handlers as ordered effect lists.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DanglingReference, MissingManifest, ParseError

CANVAS_WIDTH = 270
CANVAS_HEIGHT = 480

COMPONENT_TYPES = ("button", "checkbox", "spinner", "text_field", "list_item", "menu_item")

TAP = "tap"

Bounds = tuple[int, int, int, int]
SourceRef = tuple[str, int]


@dataclass(frozen=True)
class ComponentDecl:
    id: str
    ctype: str
    text: str
    bounds: Bounds
    initial_visible: bool
    initial_enabled: bool
    source: SourceRef


@dataclass(frozen=True)
class ActivityDecl:
    id: str
    class_file: str
    components: tuple[ComponentDecl, ...]
    source: SourceRef

    def component(self, component_id: str) -> ComponentDecl | None:
        for comp in self.components:
            if comp.id == component_id:
                return comp
        return None


@dataclass(frozen=True)
class Effect:
    """One handler effect.

    ``kind`` is one of navigate, set_visible, set_enabled, set_text, crash,
    exit. ``value`` carries the bool for set_visible/set_enabled, the text for
    set_text, and the message for crash.
    """

    kind: str
    source: SourceRef
    activity: str | None = None
    component: str | None = None
    value: bool | str | None = None


@dataclass(frozen=True)
class HandlerDecl:
    activity: str
    component: str
    action: str
    effects: tuple[Effect, ...]
    source: SourceRef


@dataclass
class AppBundle:
    app_id: str
    version: str
    launch_activity: str
    activities: tuple[ActivityDecl, ...]
    handlers: tuple[HandlerDecl, ...]
    _activity_index: dict[str, ActivityDecl] = field(init=False, repr=False)
    _handler_index: dict[tuple[str, str], HandlerDecl] = field(init=False, repr=False)

    def __post_init__(self):
        self._activity_index = {a.id: a for a in self.activities}
        self._handler_index = {(h.activity, h.component): h for h in self.handlers}

    def activity(self, activity_id: str) -> ActivityDecl:
        return self._activity_index[activity_id]

    def has_activity(self, activity_id: str) -> bool:
        return activity_id in self._activity_index

    def component(self, activity_id: str, component_id: str) -> ComponentDecl | None:
        decl = self._activity_index.get(activity_id)
        return decl.component(component_id) if decl else None

    def handler_for(self, activity_id: str, component_id: str) -> HandlerDecl | None:
        return self._handler_index.get((activity_id, component_id))


_COMPONENT_RE = re.compile(
    r'^component\s+(?P<id>[A-Za-z_][A-Za-z0-9_]*)'
    r'\s+type=(?P<ctype>[a-z_]+)'
    r'\s+text="(?P<text>[^"]*)"'
    r'\s+bounds=(?P<x>-?\d+),(?P<y>-?\d+),(?P<w>-?\d+),(?P<h>-?\d+)'
    r'(?:\s+visible=(?P<visible>true|false))?'
    r'(?:\s+enabled=(?P<enabled>true|false))?\s*$'
)

_ACTIVITY_RE = re.compile(
    r'^activity\s+(?P<id>[A-Za-z_][A-Za-z0-9_]*)\s+class\s+(?P<class>src/[A-Za-z0-9_.-]+\.logic)\s*$'
)

_ON_RE = re.compile(
    r'^on\s+tap\s+(?P<activity>[A-Za-z_][A-Za-z0-9_]*)\.(?P<component>[A-Za-z_][A-Za-z0-9_]*):\s*$'
)

_SET_RE = re.compile(
    r'^set\s+(?P<activity>[A-Za-z_][A-Za-z0-9_]*)\.(?P<component>[A-Za-z_][A-Za-z0-9_]*)'
    r'\s+(?P<prop>visible|enabled)=(?P<value>true|false)\s*$'
)

_SETTEXT_RE = re.compile(
    r'^settext\s+(?P<activity>[A-Za-z_][A-Za-z0-9_]*)\.(?P<component>[A-Za-z_][A-Za-z0-9_]*)'
    r'\s+"(?P<text>[^"]*)"\s*$'
)

_NAVIGATE_RE = re.compile(r'^navigate\s+(?P<activity>[A-Za-z_][A-Za-z0-9_]*)\s*$')

_CRASH_RE = re.compile(r'^crash\s+"(?P<message>[^"]*)"\s*$')

_EXIT_RE = re.compile(r'^exit\s*$')

_TERMINAL_EFFECTS = ("navigate", "crash", "exit")


def _significant(lines: list[str]) -> list[tuple[int, str]]:
    """Yield (1-based line number, line) pairs, skipping blanks and comments."""
    out = []
    for i, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append((i, raw))
    return out


def _parse_layout(path: Path, rel: str) -> ActivityDecl:
    lines = path.read_text(encoding="utf-8").splitlines()
    activity_id: str | None = None
    class_file: str | None = None
    activity_line = 0
    components: list[ComponentDecl] = []
    seen_ids: set[str] = set()

    for lineno, raw in _significant(lines):
        line = raw.strip()
        if line.startswith("activity"):
            if activity_id is not None:
                raise ParseError(rel, lineno, "multiple activity declarations in one layout file")
            m = _ACTIVITY_RE.match(line)
            if not m:
                raise ParseError(rel, lineno, "malformed activity declaration")
            activity_id = m.group("id")
            class_file = m.group("class")
            activity_line = lineno
            if activity_id != path.stem:
                raise ParseError(rel, lineno, f"activity id {activity_id!r} does not match file name {path.name!r}")
        elif line.startswith("component"):
            if activity_id is None:
                raise ParseError(rel, lineno, "component declared before activity line")
            m = _COMPONENT_RE.match(line)
            if not m:
                raise ParseError(rel, lineno, "malformed component declaration")
            cid = m.group("id")
            if cid in seen_ids:
                raise ParseError(rel, lineno, f"duplicate component id {cid!r}")
            seen_ids.add(cid)
            ctype = m.group("ctype")
            if ctype not in COMPONENT_TYPES:
                raise ParseError(rel, lineno, f"unknown component type {ctype!r}")
            x, y, w, h = (int(m.group(k)) for k in ("x", "y", "w", "h"))
            if w < 1 or h < 1:
                raise ParseError(rel, lineno, "component width and height must be at least 1")
            if x < 0 or y < 0 or x + w > CANVAS_WIDTH or y + h > CANVAS_HEIGHT:
                raise ParseError(
                    rel, lineno,
                    f"bounds {x},{y},{w},{h} exceed the {CANVAS_WIDTH}x{CANVAS_HEIGHT} canvas",
                )
            components.append(ComponentDecl(
                id=cid,
                ctype=ctype,
                text=m.group("text"),
                bounds=(x, y, w, h),
                initial_visible=m.group("visible") != "false",
                initial_enabled=m.group("enabled") != "false",
                source=(rel, lineno),
            ))
        else:
            raise ParseError(rel, lineno, f"unrecognized line: {line.split()[0]!r}")

    if activity_id is None or class_file is None:
        raise ParseError(rel, 1, "layout file has no activity declaration")
    return ActivityDecl(
        id=activity_id,
        class_file=class_file,
        components=tuple(components),
        source=(rel, activity_line),
    )


def _parse_effect(line: str, rel: str, lineno: int) -> Effect:
    src = (rel, lineno)
    m = _NAVIGATE_RE.match(line)
    if m:
        return Effect(kind="navigate", activity=m.group("activity"), source=src)
    m = _SET_RE.match(line)
    if m:
        kind = "set_visible" if m.group("prop") == "visible" else "set_enabled"
        return Effect(
            kind=kind,
            activity=m.group("activity"),
            component=m.group("component"),
            value=m.group("value") == "true",
            source=src,
        )
    m = _SETTEXT_RE.match(line)
    if m:
        return Effect(
            kind="set_text",
            activity=m.group("activity"),
            component=m.group("component"),
            value=m.group("text"),
            source=src,
        )
    m = _CRASH_RE.match(line)
    if m:
        return Effect(kind="crash", value=m.group("message"), source=src)
    if _EXIT_RE.match(line):
        return Effect(kind="exit", source=src)
    raise ParseError(rel, lineno, f"malformed effect line: {line!r}")


def _parse_logic(path: Path, rel: str) -> list[HandlerDecl]:
    lines = path.read_text(encoding="utf-8").splitlines()
    handlers: list[HandlerDecl] = []
    trigger: tuple[str, str] | None = None
    trigger_line = 0
    effects: list[Effect] = []

    def close_block():
        if trigger is None:
            return
        if not effects:
            raise ParseError(rel, trigger_line, f"handler for {trigger[0]}.{trigger[1]} has no effects")
        for i, eff in enumerate(effects):
            if eff.kind in _TERMINAL_EFFECTS and i != len(effects) - 1:
                raise ParseError(rel, eff.source[1], f"{eff.kind} effect must be the last in its handler")
        handlers.append(HandlerDecl(
            activity=trigger[0],
            component=trigger[1],
            action=TAP,
            effects=tuple(effects),
            source=(rel, trigger_line),
        ))

    for lineno, raw in _significant(lines):
        indented = raw[0] in (" ", "\t")
        line = raw.strip()
        if not indented:
            m = _ON_RE.match(line)
            if not m:
                raise ParseError(rel, lineno, f"expected 'on tap <Activity>.<Component>:', got {line!r}")
            close_block()
            trigger = (m.group("activity"), m.group("component"))
            trigger_line = lineno
            effects = []
        else:
            if trigger is None:
                raise ParseError(rel, lineno, "effect line outside a handler block")
            effects.append(_parse_effect(line, rel, lineno))
    close_block()
    return handlers


def load_bundle(root_path: str | Path) -> AppBundle:
    """Parse and fully validate an app bundle directory.

    Raises MissingManifest, ParseError, or DanglingReference; a returned
    bundle has every cross-reference resolved.
    """
    root = Path(root_path)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise MissingManifest(f"no manifest.json under {root}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError("manifest.json", exc.lineno, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(manifest, dict):
        raise ParseError("manifest.json", 1, "manifest must be a JSON object")
    for key in ("app_id", "version", "launch"):
        if not isinstance(manifest.get(key), str) or not manifest[key]:
            raise ParseError("manifest.json", 1, f"missing or invalid {key!r}")

    layouts_dir = root / "layouts"
    if not layouts_dir.is_dir():
        raise ParseError("layouts", 1, "bundle has no layouts/ directory")
    activities: list[ActivityDecl] = []
    for layout_path in sorted(layouts_dir.glob("*.layout")):
        rel = f"layouts/{layout_path.name}"
        activities.append(_parse_layout(layout_path, rel))
    if not activities:
        raise ParseError("layouts", 1, "bundle declares no activities")

    activity_ids = {a.id for a in activities}
    if manifest["launch"] not in activity_ids:
        raise DanglingReference("manifest.json", 1, manifest["launch"])

    class_refs: dict[str, ActivityDecl] = {}
    for a in activities:
        class_refs.setdefault(a.class_file, a)
    handlers: list[HandlerDecl] = []
    for class_file in sorted(class_refs):
        logic_path = root / class_file
        if not logic_path.is_file():
            referencing = class_refs[class_file]
            raise ParseError(referencing.source[0], referencing.source[1], f"logic file not found: {class_file}")
        handlers.extend(_parse_logic(logic_path, class_file))

    bundle = AppBundle(
        app_id=manifest["app_id"],
        version=manifest["version"],
        launch_activity=manifest["launch"],
        activities=tuple(activities),
        handlers=tuple(handlers),
    )
    _validate_references(bundle)
    return bundle


def _validate_references(bundle: AppBundle) -> None:
    seen_triggers: set[tuple[str, str]] = set()
    for handler in bundle.handlers:
        file, line = handler.source
        target = f"{handler.activity}.{handler.component}"
        if bundle.component(handler.activity, handler.component) is None:
            raise DanglingReference(file, line, target)
        key = (handler.activity, handler.component)
        if key in seen_triggers:
            raise ParseError(file, line, f"duplicate handler for {target}")
        seen_triggers.add(key)
        for eff in handler.effects:
            efile, eline = eff.source
            if eff.kind == "navigate":
                if not bundle.has_activity(eff.activity):
                    raise DanglingReference(efile, eline, eff.activity)
            elif eff.kind in ("set_visible", "set_enabled", "set_text"):
                if bundle.component(eff.activity, eff.component) is None:
                    raise DanglingReference(efile, eline, f"{eff.activity}.{eff.component}")
