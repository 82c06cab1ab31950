"""Deterministic app simulator: launch, observe, tap, fingerprint.

All operations are pure functions of their inputs; states are values and are
never mutated in place. Override maps are kept minimal (entries that match
the declared defaults are dropped), so state equality, override equality,
and fingerprint equality all coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bundle import TAP, AppBundle, Bounds
from .errors import IllegalTarget, Terminated

RUNNING = "running"
CRASHED = "crashed"
EXITED = "exited"

Overrides = dict[tuple[str, str], dict[str, bool | str]]


@dataclass(frozen=True, eq=True)
class SimState:
    current_activity: str
    overrides: Overrides = field(default_factory=dict)
    terminated: str = RUNNING
    crash_message: str | None = None

    def is_running(self) -> bool:
        return self.terminated == RUNNING


@dataclass(frozen=True)
class WidgetView:
    component_id: str
    ctype: str
    effective_text: str
    effective_visible: bool
    effective_enabled: bool
    bounds: Bounds


@dataclass(frozen=True)
class ScreenObservation:
    activity: str
    widgets: tuple[WidgetView, ...]

    def widget(self, component_id: str) -> WidgetView | None:
        for w in self.widgets:
            if w.component_id == component_id:
                return w
        return None


@dataclass(frozen=True, order=True)
class Fingerprint:
    canonical: str
    short_id: str

    @classmethod
    def of(cls, canonical: str) -> "Fingerprint":
        return cls(canonical=canonical, short_id=fnv1a32(canonical))


@dataclass(frozen=True)
class StepOutcome:
    """Result of one tap: a successor state, a self-loop, or a terminal."""

    kind: str  # "state" | "no_op" | "crashed" | "exited"
    state: SimState
    message: str | None = None


def fnv1a32(text: str) -> str:
    """32-bit FNV-1a of the UTF-8 bytes, as 8 lowercase hex chars."""
    h = 0x811C9DC5
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * 0x01000193) & 0xFFFFFFFF
    return format(h, "08x")


def launch(bundle: AppBundle) -> SimState:
    """Fresh state at the manifest's launch activity, no overrides."""
    return SimState(current_activity=bundle.launch_activity)


def _effective(bundle: AppBundle, state: SimState, activity_id: str, component_id: str) -> tuple[bool, bool, str]:
    decl = bundle.component(activity_id, component_id)
    ov = state.overrides.get((activity_id, component_id), {})
    visible = ov.get("visible", decl.initial_visible)
    enabled = ov.get("enabled", decl.initial_enabled)
    text = ov.get("text", decl.text)
    return visible, enabled, text


def observe(bundle: AppBundle, state: SimState) -> ScreenObservation:
    """Every component declared in the current activity, overrides applied."""
    if not state.is_running():
        raise Terminated(f"cannot observe a {state.terminated} state")
    decl = bundle.activity(state.current_activity)
    widgets = []
    for comp in sorted(decl.components, key=lambda c: c.id):
        visible, enabled, text = _effective(bundle, state, decl.id, comp.id)
        widgets.append(WidgetView(
            component_id=comp.id,
            ctype=comp.ctype,
            effective_text=text,
            effective_visible=visible,
            effective_enabled=enabled,
            bounds=comp.bounds,
        ))
    return ScreenObservation(activity=decl.id, widgets=tuple(widgets))


def _with_override(bundle: AppBundle, overrides: Overrides, activity: str, component: str,
                   prop: str, value: bool | str) -> Overrides:
    decl = bundle.component(activity, component)
    declared = {"visible": decl.initial_visible, "enabled": decl.initial_enabled, "text": decl.text}[prop]
    new: Overrides = {k: dict(v) for k, v in overrides.items()}
    key = (activity, component)
    entry = new.setdefault(key, {})
    if value == declared:
        entry.pop(prop, None)
    else:
        entry[prop] = value
    if not entry:
        del new[key]
    return new


def apply_action(bundle: AppBundle, state: SimState, component: str, action: str = TAP) -> StepOutcome:
    """Tap a component on the current screen.

    A matching handler's effects run in order; without one the tap is an
    identity transition. Raises Terminated on finished states and
    IllegalTarget when the component is absent, hidden, or disabled.
    """
    if not state.is_running():
        raise Terminated(f"cannot act on a {state.terminated} state")
    if action != TAP:
        raise IllegalTarget(f"unsupported action {action!r}")
    if bundle.component(state.current_activity, component) is None:
        raise IllegalTarget(f"component {component!r} not declared in activity {state.current_activity!r}")
    visible, enabled, _ = _effective(bundle, state, state.current_activity, component)
    if not visible:
        raise IllegalTarget(f"component {component!r} not visible")
    if not enabled:
        raise IllegalTarget(f"component {component!r} not enabled")

    handler = bundle.handler_for(state.current_activity, component)
    if handler is None:
        return StepOutcome(kind="no_op", state=state)

    activity = state.current_activity
    overrides = state.overrides
    for eff in handler.effects:
        if eff.kind == "navigate":
            activity = eff.activity
        elif eff.kind == "set_visible":
            overrides = _with_override(bundle, overrides, eff.activity, eff.component, "visible", eff.value)
        elif eff.kind == "set_enabled":
            overrides = _with_override(bundle, overrides, eff.activity, eff.component, "enabled", eff.value)
        elif eff.kind == "set_text":
            overrides = _with_override(bundle, overrides, eff.activity, eff.component, "text", eff.value)
        elif eff.kind == "crash":
            crashed = SimState(current_activity=activity, overrides=overrides,
                               terminated=CRASHED, crash_message=eff.value)
            return StepOutcome(kind=CRASHED, state=crashed, message=eff.value)
        elif eff.kind == "exit":
            exited = SimState(current_activity=activity, overrides=overrides, terminated=EXITED)
            return StepOutcome(kind=EXITED, state=exited)
    return StepOutcome(kind="state", state=SimState(current_activity=activity, overrides=overrides))


def _escape(text: str) -> str:
    return (text.replace("\\", "\\\\")
                .replace(";", "\\;")
                .replace(",", "\\,")
                .replace("\n", "\\n"))


def fingerprint(bundle: AppBundle, state: SimState) -> Fingerprint:
    """Canonical full-state serialization plus its FNV-1a short id.

    Covers every component of every activity, so two states fingerprint
    equal exactly when their activity and effective component values agree.
    """
    if not state.is_running():
        raise Terminated("terminated states have no fingerprint")
    parts = [f"activity={state.current_activity};"]
    for activity in sorted(bundle.activities, key=lambda a: a.id):
        for comp in sorted(activity.components, key=lambda c: c.id):
            visible, enabled, text = _effective(bundle, state, activity.id, comp.id)
            parts.append(
                f"{activity.id}.{comp.id}:v={int(visible)},e={int(enabled)},t={_escape(text)};"
            )
    return Fingerprint.of("".join(parts))
