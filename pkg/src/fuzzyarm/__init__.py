"""Desk-scale multimodal pick-and-place workbench.

A simulated arm driven by an interval type-2 fuzzy servo controller executes
commands parsed from natural-language action lists, with speech and vision
models abstracted behind mockable adapters and a metrics layer accounting for
per-stage latency and error attribution.
"""

__version__ = "0.1.0"
