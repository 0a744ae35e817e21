"""Tunable diagnostic thresholds.

The growth thresholds were frozen after calibrating the simulation oracle on
the built-in presets; they live here rather than inline so a deployment can
re-calibrate without touching the diagnostic logic.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DiagnosticConfig:
    # |max at last checkpoint - max at first checkpoint| below which a series
    # counts as non-growing (must hold for every start point)
    no_growth_slack: float = 0.5
    # excess of the final max over the first-checkpoint max that counts as
    # growth (must hold on a majority of start points).  Calibration on the
    # sqrt2 preset, N = 1e6, first checkpoint 100: certified bounded sets stay
    # below 0.25 while the [0, 1/2) control exceeds 1.25 on 78% of starts.
    growth_margin: float = 1.25
    # minimum checkpoints / decades for the diagnostic to be meaningful
    min_checkpoints: int = 3
    min_decades: float = 2.0
    # sampling hygiene: resample start points this close to a set boundary
    boundary_margin: float = 1e-9


DEFAULT_DIAGNOSTIC = DiagnosticConfig()
