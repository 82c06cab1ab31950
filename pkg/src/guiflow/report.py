"""Bug-report model, exporters, and the replay checker.

A report is an ordered list of augmented steps. ``replay_report`` decides
mechanically whether the report reproduces on a bundle: every step must be
executable in order, and for non-degraded reports the final simulator
outcome must match the recorded expectation.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .bundle import AppBundle, SourceRef
from .errors import AppMismatch, GuiflowError, SchemaError
from .jsonio import canonical_bytes
from .ripper import EventFlowGraph, Target, Terminal
from .simulator import CRASHED, EXITED, Fingerprint, apply_action, fingerprint, launch


@dataclass(frozen=True)
class StepTraceability:
    layout_source: SourceRef
    referencing_class_files: tuple[SourceRef, ...]


@dataclass(frozen=True)
class AugmentedStep:
    index: int
    action: str
    activity: str
    component: str
    component_type: str
    traceability: StepTraceability
    screenshot: str | None = None
    source_state: Fingerprint | None = None
    target: Target | None = None

    def is_verified(self) -> bool:
        return self.source_state is not None


@dataclass(frozen=True)
class BugReport:
    report_id: str
    app_id: str
    version: str
    title: str
    description: str
    degraded: bool
    steps: tuple[AugmentedStep, ...]
    expected_outcome: Target | None = None


@dataclass(frozen=True)
class ReplayVerdict:
    kind: str  # "reproducible" | "failed_at_step" | "outcome_mismatch"
    step_index: int | None = None
    reason: str | None = None
    expected: Target | None = None
    actual: Target | None = None

    @classmethod
    def reproducible(cls) -> "ReplayVerdict":
        return cls(kind="reproducible")

    @classmethod
    def failed_at_step(cls, index: int, reason: str) -> "ReplayVerdict":
        return cls(kind="failed_at_step", step_index=index, reason=reason)

    @classmethod
    def outcome_mismatch(cls, expected: Target, actual: Target) -> "ReplayVerdict":
        return cls(kind="outcome_mismatch", expected=expected, actual=actual)

    @property
    def is_reproducible(self) -> bool:
        return self.kind == "reproducible"

    def describe(self) -> str:
        if self.kind == "reproducible":
            return "REPRODUCIBLE"
        if self.kind == "failed_at_step":
            return f"FailedAtStep {self.step_index}: {self.reason}"
        return f"OutcomeMismatch: expected {_target_label(self.expected)}, got {_target_label(self.actual)}"


def _target_label(target: Target | None) -> str:
    if target is None:
        return "nothing"
    if isinstance(target, Terminal):
        return target.kind if target.message is None else f"{target.kind}({target.message})"
    return target.short_id


def compute_report_id(app_id: str, version: str, title: str, description: str,
                      steps: tuple[AugmentedStep, ...]) -> str:
    """Content-derived id, stable across runs for identical reports."""
    payload = canonical_bytes({
        "app_id": app_id,
        "steps": [[s.index, s.activity, s.component, s.action] for s in steps],
        "title": title,
        "version": version,
    })
    return hashlib.sha256(payload).hexdigest()[:12]


def replay_report(report: BugReport, bundle: AppBundle) -> ReplayVerdict:
    """Drive the simulator through the report's steps and judge the outcome."""
    if bundle.app_id != report.app_id or bundle.version != report.version:
        raise AppMismatch(
            f"report targets {report.app_id} {report.version}, "
            f"bundle is {bundle.app_id} {bundle.version}"
        )

    state = launch(bundle)
    actual: Target | None = None
    for step in report.steps:
        if not state.is_running():
            return ReplayVerdict.failed_at_step(step.index, f"app already {state.terminated}")
        try:
            outcome = apply_action(bundle, state, step.component, step.action)
        except GuiflowError as exc:
            return ReplayVerdict.failed_at_step(step.index, str(exc))
        state = outcome.state
        if outcome.kind in (CRASHED, EXITED):
            actual = Terminal(kind=outcome.kind, message=outcome.message)

    if report.expected_outcome is not None:
        if actual is None:
            actual = fingerprint(bundle, state)
        if actual != report.expected_outcome:
            return ReplayVerdict.outcome_mismatch(report.expected_outcome, actual)
    return ReplayVerdict.reproducible()


def _target_json(target: Target) -> dict:
    if isinstance(target, Terminal):
        out = {"kind": target.kind}
        if target.message is not None:
            out["message"] = target.message
        return out
    return {"canonical": target.canonical, "kind": "state"}


def _target_from_json(obj) -> Target:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("report", "malformed outcome target")
    if obj["kind"] == "state":
        if not isinstance(obj.get("canonical"), str):
            raise SchemaError("report", "state target needs a canonical string")
        return Fingerprint.of(obj["canonical"])
    if obj["kind"] == "crashed":
        return Terminal(kind="crashed", message=obj.get("message"))
    if obj["kind"] == "exited":
        return Terminal(kind="exited")
    raise SchemaError("report", f"unknown target kind {obj['kind']!r}")


def export_json(report: BugReport) -> bytes:
    doc = {
        "app_id": report.app_id,
        "degraded": report.degraded,
        "description": report.description,
        "report_id": report.report_id,
        "steps": [],
        "title": report.title,
        "version": report.version,
    }
    if report.expected_outcome is not None:
        doc["expected_outcome"] = _target_json(report.expected_outcome)
    for step in report.steps:
        entry = {
            "action": step.action,
            "activity": step.activity,
            "component": step.component,
            "component_type": step.component_type,
            "index": step.index,
            "traceability": {
                "layout_source": {"file": step.traceability.layout_source[0],
                                  "line": step.traceability.layout_source[1]},
                "referencing_class_files": [
                    {"file": f, "line": l} for f, l in step.traceability.referencing_class_files
                ],
            },
        }
        if step.is_verified():
            entry["screenshot"] = step.screenshot
            entry["source_state"] = step.source_state.canonical
            entry["target"] = _target_json(step.target)
        doc["steps"].append(entry)
    return canonical_bytes(doc)


def _source_ref_from_json(obj) -> SourceRef:
    if not isinstance(obj, dict) or not isinstance(obj.get("file"), str) or not isinstance(obj.get("line"), int):
        raise SchemaError("report", "malformed source reference")
    return (obj["file"], obj["line"])


def import_json(data: bytes | str) -> BugReport:
    import json

    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError("report", f"invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("report", "expected an object")
    for key in ("app_id", "version", "title", "description", "report_id"):
        if not isinstance(doc.get(key), str):
            raise SchemaError("report", f"missing or invalid {key!r}")
    if not isinstance(doc.get("degraded"), bool) or not isinstance(doc.get("steps"), list):
        raise SchemaError("report", "missing degraded flag or steps list")

    steps = []
    for entry in doc["steps"]:
        if not isinstance(entry, dict):
            raise SchemaError("report", "step entries must be objects")
        for key in ("action", "activity", "component", "component_type"):
            if not isinstance(entry.get(key), str):
                raise SchemaError("report", f"step {key} must be a string")
        if not isinstance(entry.get("index"), int):
            raise SchemaError("report", "step index must be an integer")
        trace = entry.get("traceability")
        if not isinstance(trace, dict):
            raise SchemaError("report", "step needs traceability")
        verified_keys = [k for k in ("screenshot", "source_state", "target") if k in entry]
        if verified_keys and len(verified_keys) != 3:
            raise SchemaError("report", "screenshot/source_state/target must appear together")
        steps.append(AugmentedStep(
            index=entry["index"],
            action=entry["action"],
            activity=entry["activity"],
            component=entry["component"],
            component_type=entry["component_type"],
            traceability=StepTraceability(
                layout_source=_source_ref_from_json(trace.get("layout_source")),
                referencing_class_files=tuple(
                    _source_ref_from_json(r) for r in trace.get("referencing_class_files", [])
                ),
            ),
            screenshot=entry.get("screenshot"),
            source_state=Fingerprint.of(entry["source_state"]) if verified_keys else None,
            target=_target_from_json(entry["target"]) if verified_keys else None,
        ))

    indices = [s.index for s in steps]
    if indices != list(range(1, len(steps) + 1)):
        raise SchemaError("report", "step indices must be contiguous from 1")
    if not steps:
        raise SchemaError("report", "report has no steps")

    expected = None
    if "expected_outcome" in doc:
        if doc["degraded"]:
            raise SchemaError("report", "degraded reports cannot carry an expected outcome")
        expected = _target_from_json(doc["expected_outcome"])
    elif not doc["degraded"]:
        raise SchemaError("report", "non-degraded reports need an expected outcome")

    return BugReport(
        report_id=doc["report_id"],
        app_id=doc["app_id"],
        version=doc["version"],
        title=doc["title"],
        description=doc["description"],
        degraded=doc["degraded"],
        steps=tuple(steps),
        expected_outcome=expected,
    )


def _outcome_sentence(target: Target) -> str:
    if isinstance(target, Terminal):
        if target.kind == "crashed":
            return f"The app crashes with message `{target.message}`."
        return "The app exits."
    return f"The app ends in state `{target.short_id}`."


def export_markdown(report: BugReport) -> str:
    lines = [f"# {report.title}", ""]
    if report.description:
        lines += [report.description, ""]
    lines += [f"App: `{report.app_id}` version `{report.version}`  ", f"Report id: `{report.report_id}`"]
    if report.degraded:
        lines += ["", "> Some steps were recorded from the static component list only and",
                  "> could not be verified against the explored app model."]
    lines += ["", "## Steps to Reproduce", ""]
    for step in report.steps:
        lines.append(f"{step.index}. Tap `{step.component}` on `{step.activity}`")
        if step.screenshot is not None:
            lines.append(f"   ![step {step.index} screenshot]({step.screenshot})")
        else:
            lines.append("   (no screenshot available)")
        file, line = step.traceability.layout_source
        note = f"   <sub>declared at {file}:{line}"
        if step.traceability.referencing_class_files:
            refs = ", ".join(f"{f}:{l}" for f, l in step.traceability.referencing_class_files)
            note += f"; referenced from {refs}"
        lines.append(note + "</sub>")
    if report.expected_outcome is not None:
        lines += ["", "## Expected Outcome", "", _outcome_sentence(report.expected_outcome)]
    return "\n".join(lines) + "\n"


def export_dot(graph: EventFlowGraph) -> str:
    """Graphviz rendering of the event-flow model."""
    lines = ["digraph event_flow {", "  rankdir=LR;"]
    for fp in graph.sorted_states():
        shape = ', shape=box' if fp == graph.launch_state else ''
        lines.append(f'  "{fp.short_id}" [label="{fp.short_id}"{shape}];')
    lines.append('  "CRASHED" [label="CRASHED", shape=doubleoctagon];')
    lines.append('  "EXITED" [label="EXITED", shape=doubleoctagon];')
    for edge in graph.edges:
        if isinstance(edge.target, Terminal):
            target = edge.target.kind.upper()
        else:
            target = edge.target.short_id
        lines.append(f'  "{edge.source.short_id}" -> "{target}" [label="{edge.component}/{edge.action}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
