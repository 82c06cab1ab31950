"""Static analysis of an app bundle.

Walks the declared layouts and handler code to build the universe of GUI
components: per-component type, possible actions, declared text, and
traceability links back to the exact file and line that declare or
reference the component.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bundle import TAP, AppBundle, SourceRef
from .errors import UnknownComponent

# Type-to-action table. Data rather than logic so new gestures slot in
# without touching the analysis pass.
_ACTION_TABLE: dict[str, tuple[str, ...]] = {
    "button": (TAP,),
    "checkbox": (TAP,),
    "spinner": (TAP,),
    "text_field": (TAP,),
    "list_item": (TAP,),
    "menu_item": (TAP,),
}


def possible_actions_for(ctype: str) -> tuple[str, ...]:
    return _ACTION_TABLE[ctype]


@dataclass(frozen=True)
class StaticComponentRecord:
    activity: str
    component: str
    ctype: str
    possible_actions: tuple[str, ...]
    declared_text: str
    layout_source: SourceRef
    referencing_class_files: tuple[SourceRef, ...]


@dataclass
class StaticUniverse:
    app_id: str
    version: str
    records: tuple[StaticComponentRecord, ...]

    def __post_init__(self):
        self._by_key = {(r.activity, r.component): r for r in self.records}

    def record(self, activity: str, component: str) -> StaticComponentRecord:
        try:
            return self._by_key[(activity, component)]
        except KeyError:
            raise UnknownComponent(f"{activity}.{component} is not in the universe") from None

    def has(self, activity: str, component: str) -> bool:
        return (activity, component) in self._by_key


def build_static_universe(bundle: AppBundle) -> StaticUniverse:
    """One record per declared component, with code references resolved.

    A component's referencing lines are every handler trigger on it plus
    every set/settext effect targeting it, deduplicated and sorted.
    """
    refs: dict[tuple[str, str], set[SourceRef]] = {}
    for handler in bundle.handlers:
        refs.setdefault((handler.activity, handler.component), set()).add(handler.source)
        for eff in handler.effects:
            if eff.component is not None:
                refs.setdefault((eff.activity, eff.component), set()).add(eff.source)

    records = []
    for activity in sorted(bundle.activities, key=lambda a: a.id):
        for comp in sorted(activity.components, key=lambda c: c.id):
            records.append(StaticComponentRecord(
                activity=activity.id,
                component=comp.id,
                ctype=comp.ctype,
                possible_actions=possible_actions_for(comp.ctype),
                declared_text=comp.text,
                layout_source=comp.source,
                referencing_class_files=tuple(sorted(refs.get((activity.id, comp.id), ()))),
            ))
    return StaticUniverse(app_id=bundle.app_id, version=bundle.version, records=tuple(records))
