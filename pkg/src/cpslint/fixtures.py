"""Deterministic synthetic trace matching the power-trace schema used in tests.

Columns: millisecond timestamps, voltage and current waveforms, cumulative
energy and a sparse UART message column carrying phase markers at regular
intervals.  Waveforms are a linear ramp plus one slow sinusoid plus bounded
noise, all scaled to the row count, so that every value stays strictly
inside the ranges the test programs declare and the per-row slope dominates
noise and curvature everywhere; linear imputation over short gaps then
lands within one local inter-row delta of the true signal.
"""

from __future__ import annotations

import math
import random

from .errors import DataError
from .table import Cell, Column, Table

PHASE_MARKER = "image loader"
SECONDARY_MARKER = "image saved"


def marker_interval(rows: int) -> int:
    return max(50, rows // 10)


def generate_reference(rows: int = 10_000, seed: int = 42) -> Table:
    """Build the reference table; equal arguments yield identical tables."""
    if rows < 100:
        raise DataError("reference fixture needs at least 100 rows")
    rng = random.Random(seed)
    interval = marker_interval(rows)
    phase_at = interval // 2
    secondary_at = phase_at + interval // 4
    noise = 0.5 / rows

    timestamps: list[Cell] = []
    voltage: list[Cell] = []
    current: list[Cell] = []
    energy: list[Cell] = []
    uart: list[Cell] = []
    total = 0.0
    for i in range(rows):
        timestamps.append(1000 + i)
        v = 2.0 + 10.0 * i / rows + 0.5 * math.sin(2 * math.pi * i / rows) \
            + rng.uniform(-noise, noise)
        a = 0.8 + 3.0 * i / rows + 0.2 * math.sin(2 * math.pi * i / (1.6 * rows) + 1.0) \
            + rng.uniform(-noise, noise)
        voltage.append(v)
        current.append(a)
        total += v * a * 1e-3  # watts over one millisecond
        energy.append(total)
        if i % interval == phase_at:
            uart.append(PHASE_MARKER)
        elif i % interval == secondary_at:
            uart.append(SECONDARY_MARKER)
        else:
            uart.append(None)
    return Table([
        Column("Timestamp", timestamps),
        Column("Voltage", voltage),
        Column("Current", current),
        Column("Energy", energy),
        Column("UART", uart),
    ])
