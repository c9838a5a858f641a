"""Uniform phase-space windows, 2D slices of the Wigner functions, and peak location.

Work is partitioned by rows. Every row is evaluated by the same call no
matter which worker runs it, so the output is bitwise independent of the
worker count.
"""

from __future__ import annotations

import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .bell import BellSpec, bell_terms
from .errors import DomainError, InternalConsistencyError
from .wigner2 import SuperpositionSpec, wigner_superposition

__all__ = [
    "SINGLE_LABELS",
    "BELL_LABELS",
    "Axis",
    "SliceSpec",
    "PhaseGrid",
    "evaluate_slice",
    "find_peak",
    "spec_hash",
    "analytic_bound",
]

SINGLE_LABELS = ("x", "p")
BELL_LABELS = ("xA", "pA", "xB", "pB")

Target = Union[SuperpositionSpec, BellSpec]


@dataclass(frozen=True)
class Axis:
    label: str
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.label not in SINGLE_LABELS + BELL_LABELS:
            raise DomainError(f"unknown axis label {self.label!r}")
        if not self.min < self.max:
            raise DomainError(f"axis {self.label}: need min < max, got {self.min} >= {self.max}")
        if self.count < 2:
            raise DomainError(f"axis {self.label}: need at least 2 points, got {self.count}")

    @property
    def step(self) -> float:
        return (self.max - self.min) / (self.count - 1)

    @property
    def points(self) -> np.ndarray:
        return self.min + np.arange(self.count) * self.step


@dataclass(frozen=True)
class SliceSpec:
    """Two free axes plus fixed values for every remaining coordinate."""

    free: tuple[Axis, Axis]
    fixed: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(self.free))
        fixed = self.fixed.items() if isinstance(self.fixed, dict) else self.fixed
        object.__setattr__(self, "fixed", tuple((str(k), float(v)) for k, v in fixed))
        if len(self.free) != 2:
            raise DomainError("a slice needs exactly two free axes")
        labels = [a.label for a in self.free] + [k for k, _ in self.fixed]
        if len(set(labels)) != len(labels):
            raise DomainError(f"repeated coordinate label in slice: {labels}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.free) + tuple(k for k, _ in self.fixed)

    def check_arity(self, target: Target) -> None:
        wanted = set(BELL_LABELS if isinstance(target, BellSpec) else SINGLE_LABELS)
        if set(self.labels) != wanted:
            raise DomainError(f"slice labels {sorted(self.labels)} do not partition {sorted(wanted)}")


@dataclass
class PhaseGrid:
    """Values on a slice; ``values[i, j]`` sits at (second axis point i, first axis point j)."""

    slice: SliceSpec
    values: np.ndarray
    meta: dict = field(default_factory=dict)
    terms: dict[str, np.ndarray] | None = None

    @property
    def axis1(self) -> Axis:
        return self.slice.free[0]

    @property
    def axis2(self) -> Axis:
        return self.slice.free[1]


def spec_hash(target: Target) -> str:
    return hashlib.sha256(repr(target).encode()).hexdigest()[:16]


def _row(target: Target, slc: SliceSpec, i: int, decompose: bool):
    a1, a2 = slc.free
    coords = dict(slc.fixed)
    coords[a1.label] = a1.points
    coords[a2.label] = np.full(a1.count, a2.points[i])
    if isinstance(target, BellSpec):
        terms = bell_terms(target, tuple(coords[k] for k in BELL_LABELS))
        values = terms.combine(target.variant.sign)
        parts = (terms.w1, terms.w2, terms.w3) if decompose else None
    else:
        values = wigner_superposition(target, coords["x"], coords["p"])
        parts = None
    values = np.asarray(values, dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        j = int(np.argmax(bad))
        raise InternalConsistencyError(
            f"non-finite value at {a1.label}={a1.points[j]!r}, {a2.label}={a2.points[i]!r}"
        )
    return values, parts


def _rows(args):
    target, slc, rows, decompose = args
    return [_row(target, slc, i, decompose) for i in rows]


def evaluate_slice(target: Target, slc: SliceSpec, workers: int = 1, decompose: bool = False) -> PhaseGrid:
    """Evaluate the Wigner function of ``target`` on ``slc``.

    ``decompose`` (Bell targets only) also returns the scaled W1, W2, W3 grids.
    """
    slc.check_arity(target)
    decompose = decompose and isinstance(target, BellSpec)
    n_rows = slc.free[1].count
    if workers <= 1:
        results = _rows((target, slc, range(n_rows), decompose))
    else:
        chunks = [list(range(n_rows))[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_rows, [(target, slc, c, decompose) for c in chunks]))
        results = [None] * n_rows
        for chunk, res in zip(chunks, parts):
            for i, r in zip(chunk, res):
                results[i] = r
    values = np.vstack([r[0] for r in results])
    terms = None
    if decompose:
        terms = {name: np.vstack([r[1][k] for r in results]) for k, name in enumerate(("W1", "W2", "W3"))}
    meta = {
        "spec_hash": spec_hash(target),
        "target": repr(target),
        "prefactor_sign": "+",
        "conjugated_level": "first",
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    return PhaseGrid(slc, values, meta, terms)


def find_peak(grid: PhaseGrid) -> tuple[float, float, float]:
    """Location and signed value of the largest ``|value|``; ties go to the first in row-major order."""
    if grid.values.size == 0:
        raise DomainError("empty grid")
    flat = int(np.argmax(np.abs(grid.values)))
    i, j = divmod(flat, grid.values.shape[1])
    return float(grid.axis1.points[j]), float(grid.axis2.points[i]), float(grid.values[i, j])


def analytic_bound(target: Target) -> float:
    """``1/(pi hbar)`` per particle."""
    return (1.0 / (math.pi * target.hbar)) ** (2 if isinstance(target, BellSpec) else 1)
