"""Event-flow models of GUI apps.

Loads declarative app bundles, simulates them deterministically, rips them
into event-flow graphs, and turns those graphs into auto-completed,
replayable bug reports.
"""

__version__ = "0.1.0"
