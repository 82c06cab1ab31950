"""Utilities for writing scratch app bundles inside test temp dirs."""

from __future__ import annotations

import json
from pathlib import Path

DEFAULT_MANIFEST = {"app_id": "scratch", "version": "0.0", "launch": "Main"}


def write_bundle(root: Path, layouts: dict[str, str], logic: dict[str, str],
                 manifest: dict | None = None) -> Path:
    """Create a bundle directory from layout/logic file bodies."""
    root.mkdir(parents=True, exist_ok=True)
    (root / "manifest.json").write_text(
        json.dumps(manifest or DEFAULT_MANIFEST, indent=2), encoding="utf-8")
    (root / "layouts").mkdir(exist_ok=True)
    (root / "src").mkdir(exist_ok=True)
    for name, body in layouts.items():
        (root / "layouts" / f"{name}.layout").write_text(body, encoding="utf-8")
    for name, body in logic.items():
        (root / "src" / f"{name}.logic").write_text(body, encoding="utf-8")
    return root


def single_screen_bundle(root: Path, components: list[str], logic_body: str = "") -> Path:
    """One activity named Main with the given component lines."""
    layout = "activity Main class src/Main.logic\n" + "\n".join(components) + "\n"
    return write_bundle(root, {"Main": layout}, {"Main": logic_body})
