"""Depth-first app exploration over the simulator.

Starting from launch, every tappable widget of every reached state is
executed exactly once. States are keyed by full-state fingerprints, so the
result is a deterministic transition system. Crashes and exits become
terminal pseudo-states; since the app has no universal undo, backtracking
re-establishes a state by relaunching and replaying its discovery path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bundle import AppBundle, Bounds, _validate_references
from .errors import BundleInvalid, GuiflowError, RefIntegrityError, ReplayDiverged
from .render import render_screenshot
from .simulator import (
    CRASHED,
    EXITED,
    Fingerprint,
    ScreenObservation,
    SimState,
    apply_action,
    fingerprint,
    launch,
    observe,
)
from .universe import possible_actions_for

Action = tuple[str, str]  # (component id, action name)


@dataclass(frozen=True)
class Terminal:
    """Pseudo-state for a crash or exit outcome."""

    kind: str  # "crashed" | "exited"
    message: str | None = None


Target = Fingerprint | Terminal


@dataclass(frozen=True)
class DynamicRecord:
    activity: str
    component: str
    effective_text: str
    bounds: Bounds
    full_screenshot: str
    contextual_screenshot: str
    state: Fingerprint


@dataclass(frozen=True)
class Edge:
    source: Fingerprint
    component: str
    action: str
    target: Target
    record: DynamicRecord


@dataclass(frozen=True)
class RipConfig:
    max_states: int = 10000
    max_depth: int = 50

    def __post_init__(self):
        if self.max_states < 1 or self.max_depth < 1:
            raise ValueError("rip bounds must be positive")


@dataclass
class EventFlowGraph:
    launch_state: Fingerprint
    states: dict[str, Fingerprint]  # canonical -> fingerprint
    edges: tuple[Edge, ...]
    discovery_paths: dict[Fingerprint, tuple[Action, ...]]
    truncated: bool
    shots: dict[str, bytes] = field(default_factory=dict, repr=False)

    def sorted_states(self) -> list[Fingerprint]:
        return [self.states[c] for c in sorted(self.states)]

    def outgoing(self, source: Fingerprint) -> list[Edge]:
        return [e for e in self.edges if e.source == source]

    def edge_for(self, source: Fingerprint, component: str, action: str) -> Edge | None:
        for e in self.edges:
            if e.source == source and e.component == component and e.action == action:
                return e
        return None


def enumerate_actions(observation: ScreenObservation) -> list[Action]:
    """Executable (component, action) pairs: visible and enabled widgets only."""
    actions: list[Action] = []
    for widget in observation.widgets:
        if widget.effective_visible and widget.effective_enabled:
            for action in sorted(possible_actions_for(widget.ctype)):
                actions.append((widget.component_id, action))
    return actions


def replay_path(bundle: AppBundle, path: tuple[Action, ...] | list[Action]) -> SimState:
    """Relaunch and re-apply an action sequence; the DFS backtracking primitive."""
    state = launch(bundle)
    for index, (component, action) in enumerate(path, start=1):
        try:
            outcome = apply_action(bundle, state, component, action)
        except GuiflowError as exc:
            raise ReplayDiverged(index, str(exc)) from exc
        state = outcome.state
    return state


def rip(bundle: AppBundle, config: RipConfig = RipConfig()) -> EventFlowGraph:
    """Explore the app exhaustively (within bounds) into an event-flow graph.

    Every expanded state contributes one edge per enumerated action, with a
    dynamic record and screenshots captured from the pre-step observation.
    Hitting max_states/max_depth is not an error; it only flags the graph
    as truncated.
    """
    try:
        _validate_references(bundle)
    except GuiflowError as exc:
        raise BundleInvalid(str(exc)) from exc

    launch_fp = fingerprint(bundle, launch(bundle))
    states: dict[str, Fingerprint] = {launch_fp.canonical: launch_fp}
    discovery: dict[Fingerprint, tuple[Action, ...]] = {launch_fp: ()}
    edges: list[Edge] = []
    shots: dict[str, bytes] = {}
    expanded: set[str] = set()
    truncated = False

    def store_shot(ref: str, observation: ScreenObservation, highlight: str | None) -> None:
        if ref in shots:
            return
        data = render_screenshot(observation, highlight).to_bytes()
        shots[ref] = data

    def capture(source: Fingerprint, observation: ScreenObservation, component: str) -> DynamicRecord:
        widget = observation.widget(component)
        full_ref = f"shots/{source.short_id}_full.ppm"
        ctx_ref = f"shots/{source.short_id}_{component}.ppm"
        if ctx_ref == full_ref:
            raise RefIntegrityError(f"screenshot ref collision for {ref_desc(source, component)}")
        store_shot(full_ref, observation, None)
        store_shot(ctx_ref, observation, component)
        return DynamicRecord(
            activity=observation.activity,
            component=component,
            effective_text=widget.effective_text,
            bounds=widget.bounds,
            full_screenshot=full_ref,
            contextual_screenshot=ctx_ref,
            state=source,
        )

    def ref_desc(source: Fingerprint, component: str) -> str:
        return f"state {source.short_id} component {component}"

    # Stack frames: [fingerprint, path, actions, next action index].
    def open_frame(fp: Fingerprint, path: tuple[Action, ...]) -> list | None:
        nonlocal truncated
        if fp.canonical in expanded:
            return None
        if len(expanded) >= config.max_states or len(path) >= config.max_depth:
            truncated = True
            return None
        expanded.add(fp.canonical)
        actions = enumerate_actions(observe(bundle, replay_path(bundle, path)))
        return [fp, path, actions, 0]

    stack: list[list] = []
    first = open_frame(launch_fp, ())
    if first is not None:
        stack.append(first)

    while stack:
        frame = stack[-1]
        fp, path, actions, idx = frame
        if idx == len(actions):
            stack.pop()
            continue
        frame[3] += 1
        component, action = actions[idx]

        state = replay_path(bundle, path)
        observation = observe(bundle, state)
        record = capture(fp, observation, component)
        outcome = apply_action(bundle, state, component, action)

        if outcome.kind in (CRASHED, EXITED):
            target: Target = Terminal(kind=outcome.kind, message=outcome.message)
            edges.append(Edge(fp, component, action, target, record))
            continue

        target_fp = fingerprint(bundle, outcome.state)
        if target_fp.canonical not in states:
            states[target_fp.canonical] = target_fp
            discovery[target_fp] = path + ((component, action),)
        edges.append(Edge(fp, component, action, target_fp, record))
        child = open_frame(target_fp, discovery[target_fp])
        if child is not None:
            stack.append(child)

    return EventFlowGraph(
        launch_state=launch_fp,
        states=states,
        edges=tuple(edges),
        discovery_paths=discovery,
        truncated=truncated,
        shots=shots,
    )
