"""Named slice presets for the standard phase-space figures.

Units are m = omega = hbar = 1 and q = 0.001 unless overridden. Momentum
windows span ``[-(max(n, m) + 2) h, 2 h]`` and position windows ``[-1.5, 1.5]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bell import BellSpec, BellVariant, conditional_center, midpoint_momentum
from .grid import Axis, SliceSpec, Target
from .oscillator import DeformationParams, make_params
from .wigner2 import SuperpositionSpec

__all__ = ["Figure", "momentum_window", "figure_presets", "FIGURE_NAMES"]

FIGURE_NAMES = (
    "fig1",
    "fig2a", "fig2b", "fig2c",
    "fig3a", "fig3b", "fig3c",
    "fig4a", "fig4b", "fig4c", "fig4d",
    "fig5a", "fig5b",
)


@dataclass(frozen=True)
class Figure:
    name: str
    target: Target
    slice: SliceSpec
    description: str


def momentum_window(top_level: int, params: DeformationParams) -> tuple[float, float]:
    # lam h hbar * 2 is the spacing between level centers; for lam = 1/2, hbar = 1 this is h
    unit = 2.0 * params.lam * params.h * params.hbar
    return -(top_level + 2) * unit, 2.0 * unit


def figure_presets(q: float = 0.001, count: int = 301, mass: float = 1.0, omega: float = 1.0,
                   hbar: float = 1.0) -> dict[str, Figure]:
    p = make_params(mass, omega, hbar, q)
    figs = {}

    amp = 1.0 / math.sqrt(2.0)
    sup = SuperpositionSpec(amp, amp, 3, 5, p, p)
    lo, hi = momentum_window(5, p)
    figs["fig1"] = Figure(
        "fig1", sup,
        SliceSpec((Axis("x", -1.5, 1.5, count), Axis("p", lo, hi, count))),
        "superposition n=3, m=5, a=b=1/sqrt(2)",
    )

    n, m = 2, 6
    lo, hi = momentum_window(m, p)
    xa_pa = (Axis("xA", -1.5, 1.5, count), Axis("pA", lo, hi, count))
    fixes = {
        "a": conditional_center(n, p),
        "b": midpoint_momentum(n, m, p),
        "c": conditional_center(m, p),
    }
    for fig, variant in (("fig2", BellVariant.PSI_PLUS), ("fig3", BellVariant.PHI_PLUS)):
        spec = BellSpec(variant, n, m, p, p)
        for panel, pb in fixes.items():
            figs[fig + panel] = Figure(
                fig + panel, spec, SliceSpec(xa_pa, (("xB", 0.0), ("pB", pb))),
                f"{variant.value} with particle B fixed at xB=0, pB={pb:.6g}",
            )

    mid = midpoint_momentum(n, m, p)
    xa_xb = (Axis("xA", -1.5, 1.5, count), Axis("xB", -1.5, 1.5, count))
    for panel, variant in zip("abcd", BellVariant):
        figs["fig4" + panel] = Figure(
            "fig4" + panel, BellSpec(variant, n, m, p, p),
            SliceSpec(xa_xb, (("pA", mid), ("pB", mid))),
            f"{variant.value} spatial slice at pA=pB={mid:.6g}",
        )

    for panel, variant in (("a", BellVariant.PSI_MINUS), ("b", BellVariant.PHI_MINUS)):
        figs["fig5" + panel] = Figure(
            "fig5" + panel, BellSpec(variant, n, m, p, p),
            SliceSpec(xa_pa, (("xB", 0.0), ("pB", mid))),
            f"{variant.value} with particle B fixed at xB=0, pB={mid:.6g}",
        )
    return figs
