"""Online step auto-completion over a loaded model database.

A session tracks the reporter's confirmed steps and the candidate set of
app states those steps could have reached. Suggestions are the union of
outgoing edges over that candidate set; confirming one (by choosing its
source-state screenshot variant) narrows the candidates to the edge's
target. A static fallback records a step the model never saw, at the cost
of resetting the candidate set.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field

from .errors import (
    EmptyModel,
    EmptySession,
    EmptyTitle,
    NoSteps,
    NotSuggested,
    SessionClosed,
    UnknownComponent,
    UnknownVariant,
)
from .modeldb import ModelDb
from .report import AugmentedStep, BugReport, StepTraceability, compute_report_id
from .ripper import Target
from .simulator import Fingerprint


@dataclass(frozen=True)
class Variant:
    source_state: Fingerprint
    target: Target
    contextual_screenshot: str


@dataclass(frozen=True)
class Suggestion:
    component: str
    activity: str
    action: str
    variants: tuple[Variant, ...]


@dataclass(frozen=True)
class ConfirmedStep:
    index: int
    component: str
    activity: str
    action: str
    chosen_variant: Variant | None  # None for static-fallback steps
    traceability: StepTraceability


@dataclass
class ReportSession:
    session_id: str
    db: ModelDb
    assume_launch: bool
    steps: list[ConfirmedStep] = field(default_factory=list)
    estimate: set[Target] = field(default_factory=set)
    degraded: bool = False
    closed: bool = False


def _all_states(db: ModelDb) -> set[Target]:
    return set(db.graph.states.values())


def open_session(db: ModelDb, assume_launch: bool) -> ReportSession:
    if not db.graph.states:
        raise EmptyModel("model database has no states")
    estimate: set[Target] = {db.graph.launch_state} if assume_launch else _all_states(db)
    return ReportSession(
        session_id=uuid.uuid4().hex,
        db=db,
        assume_launch=assume_launch,
        estimate=estimate,
    )


def _check_open(session: ReportSession) -> None:
    if session.closed:
        raise SessionClosed(f"session {session.session_id} was finalized")


def _trace_for(session: ReportSession, activity: str, component: str) -> StepTraceability:
    static = session.db.universe.record(activity, component)
    return StepTraceability(
        layout_source=static.layout_source,
        referencing_class_files=static.referencing_class_files,
    )


def suggestions(session: ReportSession) -> list[Suggestion]:
    """All confirmable next steps given the current candidate states."""
    _check_open(session)
    groups: dict[tuple[str, str, str], list[Variant]] = {}
    sources = sorted(
        (t for t in session.estimate if isinstance(t, Fingerprint)),
        key=lambda fp: fp.canonical,
    )
    for source in sources:
        for edge in session.db.graph.outgoing(source):
            key = (edge.component, edge.action, edge.record.activity)
            groups.setdefault(key, []).append(Variant(
                source_state=edge.source,
                target=edge.target,
                contextual_screenshot=edge.record.contextual_screenshot,
            ))
    out = []
    for component, action, activity in sorted(groups):
        variants = sorted(groups[(component, action, activity)],
                          key=lambda v: v.source_state.canonical)
        out.append(Suggestion(component=component, activity=activity, action=action,
                              variants=tuple(variants)))
    return out


def confirm_step(session: ReportSession, component: str, action: str,
                 chosen_source_state: Fingerprint) -> ReportSession:
    """Record a suggested step, verified by its source-state variant."""
    _check_open(session)
    match = None
    for suggestion in suggestions(session):
        if suggestion.component == component and suggestion.action == action:
            match = suggestion
            break
    if match is None:
        raise NotSuggested(f"({component}, {action}) is not currently suggested")
    chosen = None
    for variant in match.variants:
        if variant.source_state == chosen_source_state:
            chosen = variant
            break
    if chosen is None:
        raise UnknownVariant(f"state {chosen_source_state.short_id} is not a variant of ({component}, {action})")

    session.steps.append(ConfirmedStep(
        index=len(session.steps) + 1,
        component=component,
        activity=match.activity,
        action=action,
        chosen_variant=chosen,
        traceability=_trace_for(session, match.activity, component),
    ))
    session.estimate = {chosen.target}
    return session


def fallback_step(session: ReportSession, activity: str, component: str, action: str) -> ReportSession:
    """Record a step from the static universe only; resets the estimate."""
    _check_open(session)
    record = session.db.universe.record(activity, component)  # raises UnknownComponent
    if action not in record.possible_actions:
        raise UnknownComponent(f"{activity}.{component} does not support {action!r}")
    session.steps.append(ConfirmedStep(
        index=len(session.steps) + 1,
        component=component,
        activity=activity,
        action=action,
        chosen_variant=None,
        traceability=_trace_for(session, activity, component),
    ))
    session.degraded = True
    session.estimate = _all_states(session.db)
    return session


def _recompute(session: ReportSession) -> None:
    # The estimate and degraded flag are a pure fold over the steps.
    estimate: set[Target] = (
        {session.db.graph.launch_state} if session.assume_launch else _all_states(session.db)
    )
    degraded = False
    for step in session.steps:
        if step.chosen_variant is None:
            degraded = True
            estimate = _all_states(session.db)
        else:
            estimate = {step.chosen_variant.target}
    session.estimate = estimate
    session.degraded = degraded


def undo_step(session: ReportSession) -> ReportSession:
    _check_open(session)
    if not session.steps:
        raise EmptySession("no steps to undo")
    session.steps.pop()
    _recompute(session)
    return session


def finalize(session: ReportSession, title: str, description: str) -> BugReport:
    """Assemble the bug report and close the session."""
    _check_open(session)
    if not session.steps:
        raise NoSteps("cannot finalize a session without steps")
    if not title.strip():
        raise EmptyTitle("report title must be non-empty")

    steps = []
    for step in session.steps:
        ctype = session.db.universe.record(step.activity, step.component).ctype
        if step.chosen_variant is None:
            steps.append(AugmentedStep(
                index=step.index, action=step.action, activity=step.activity,
                component=step.component, component_type=ctype, traceability=step.traceability,
            ))
        else:
            steps.append(AugmentedStep(
                index=step.index, action=step.action, activity=step.activity,
                component=step.component, component_type=ctype, traceability=step.traceability,
                screenshot=step.chosen_variant.contextual_screenshot,
                source_state=step.chosen_variant.source_state,
                target=step.chosen_variant.target,
            ))

    expected: Target | None = None
    if not session.degraded:
        assert len(session.estimate) == 1
        expected = next(iter(session.estimate))

    steps_tuple = tuple(steps)
    report = BugReport(
        report_id=compute_report_id(session.db.app_id, session.db.version, title,
                                    description, steps_tuple),
        app_id=session.db.app_id,
        version=session.db.version,
        title=title,
        description=description,
        degraded=session.degraded,
        steps=steps_tuple,
        expected_outcome=expected,
    )
    session.closed = True
    return report
