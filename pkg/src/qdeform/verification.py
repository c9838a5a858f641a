"""Verification checks shared by ``qdeform verify`` and the acceptance tests.

Every check returns :class:`CheckResult` rows with the measured value and
the tolerance it was held to. ``level="fast"`` runs reduced lattices.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bell import (
    BellSpec,
    BellVariant,
    PhasePoint4,
    bell_terms,
    bell_wavefunction,
    bell_wigner,
    conditional_center,
    midpoint_momentum,
)
from .figures import FIGURE_NAMES, figure_presets
from .grid import Axis, SliceSpec, analytic_bound, evaluate_slice, find_peak
from .oracle import QuadratureSettings, default_settings, nodes_and_weights, settings_for, wigner_numeric_1p, wigner_numeric_2p
from .oscillator import PureStateSpec, ho_reference_psi, make_params, psi
from .output import write_csv, write_pgm16
from .wigner2 import SuperpositionSpec, wigner_superposition

__all__ = ["CheckResult", "ALL_CHECKS", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: value={self.value:.3e} tol={self.tolerance:.1e} {self.detail}".rstrip()


def _le(name, value, tol, detail=""):
    return CheckResult(name, float(value), tol, bool(value <= tol), detail)


def _pure_state(n, params):
    spec = PureStateSpec(n, params)
    return lambda x: psi(spec, x)


def _superposition_psi(spec: SuperpositionSpec):
    fa = _pure_state(spec.n, spec.params_a)
    fb = _pure_state(spec.m, spec.params_b)
    return lambda x: spec.amp_a * fa(x) + spec.amp_b * fb(x)


def _level_unit(params):
    return 2.0 * params.lam * params.h * params.hbar


def check_oracle_single(level: str = "full") -> list[CheckResult]:
    amp = 1.0 / math.sqrt(2.0)
    side = 5
    out = []
    start = time.perf_counter()
    for n, m, q in ((3, 5, 0.001), (1, 2, 0.5), (0, 4, 0.9)):
        p = make_params(q=q)
        spec = SuperpositionSpec(amp, amp, n, m, p, p)
        f = _superposition_psi(spec)
        settings = settings_for(p, max(n, m))
        unit = _level_unit(p)
        xs = np.linspace(-1.2, 1.2, side)
        ps = np.linspace(-max(n, m) * unit - 0.5, 0.5, side)
        worst = 0.0
        for x, pp in itertools.product(xs, ps):
            closed = wigner_superposition(spec, x, pp)
            numeric = wigner_numeric_1p(f, x, pp, settings, p.hbar)
            worst = max(worst, abs(closed - numeric))
        out.append(_le(f"oracle_single(n={n},m={m},q={q})", worst, 1e-8, f"points={side * side}"))
    out.append(_le("oracle_single_runtime_s", time.perf_counter() - start, 10.0))
    return out


def _bell_lattice(spec: BellSpec, side: int):
    pa, pb = spec.params_A, spec.params_B
    xs = np.linspace(-0.6, 0.6, side)
    mid_a, mid_b = midpoint_momentum(spec.n, spec.m, pa), midpoint_momentum(spec.n, spec.m, pb)
    pas = np.linspace(mid_a - 1.0, mid_a + 1.0, side)
    pbs = np.linspace(mid_b - 1.0, mid_b + 1.0, side)
    for xa, pa_, xb, pb_ in itertools.product(xs, pas, xs, pbs):
        yield PhasePoint4(float(xa), float(pa_), float(xb), float(pb_))


def check_oracle_bell(level: str = "full") -> list[CheckResult]:
    side = 3 if level == "full" else 2
    configs = [(0, 1), (1, 2)] if level == "full" else [(0, 1)]
    qs = (0.5, 0.9) if level == "full" else (0.5,)
    variants = list(BellVariant) if level == "full" else [BellVariant.PSI_PLUS, BellVariant.PHI_MINUS]
    out = []
    start = time.perf_counter()
    for (n, m), q, variant in itertools.product(configs, qs, variants):
        p = make_params(q=q)
        spec = BellSpec(variant, n, m, p, p)
        settings = QuadratureSettings(default_settings(p.lam).half_width, 16).with_frequency(
            2.0 * p.lam * p.h * max(n, m)
        )
        f = lambda a, b, spec=spec: bell_wavefunction(spec, a, b)
        worst = 0.0
        count = 0
        for pt in _bell_lattice(spec, side):
            numeric = wigner_numeric_2p(f, pt, settings, p.hbar)
            worst = max(worst, abs(bell_wigner(spec, pt) - numeric))
            count += 1
        out.append(_le(f"oracle_bell({variant.value},n={n},m={m},q={q})", worst, 1e-6, f"points={count}"))
    out.append(_le("oracle_bell_runtime_s", time.perf_counter() - start, 300.0))
    return out


def _p_window(n_max, params, pad_sigmas=8.5):
    pad = pad_sigmas * params.hbar * math.sqrt(params.lam)
    return -n_max * _level_unit(params) - pad, pad


def _x_window(params):
    # exp(-2 lam L^2) < 1e-15
    return math.sqrt(35.0 / (2.0 * params.lam))


def check_conventions(level: str = "full", prefactor_sign: float = 1.0) -> list[CheckResult]:
    """Total integral and position marginal of pure states n <= 4."""
    levels = range(5)
    qs = (0.001, 0.5, 0.9) if level == "full" else (0.5,)
    norm_worst = 0.0
    marg_worst = 0.0
    for q, n in itertools.product(qs, levels):
        p = make_params(q=q)
        spec = SuperpositionSpec.pure(n, p)
        lo, hi = _p_window(n, p)
        L = _x_window(p)
        s = QuadratureSettings(1.0, 64).with_frequency(2.0 * p.lam * p.h * n)
        xg, wx = nodes_and_weights(s, -L, L)
        pg, wp = nodes_and_weights(s, lo, hi)
        total = 0.0
        for x, w in zip(xg, wx):
            total += w * float(np.dot(wp, wigner_superposition(spec, x, pg, prefactor_sign=prefactor_sign)))
        norm_worst = max(norm_worst, abs(total - 1.0))
        xs = np.linspace(-2.0, 2.0, 21)
        marg = np.array([np.dot(wp, wigner_superposition(spec, x, pg, prefactor_sign=prefactor_sign)) for x in xs])
        dens = np.abs(psi(PureStateSpec(n, p), xs)) ** 2
        marg_worst = max(marg_worst, float(np.max(np.abs(marg - dens))))
    tag = "" if prefactor_sign > 0 else "[flipped]"
    return [
        _le(f"normalization_pure{tag}", norm_worst, 1e-6, f"q={qs}, n<=4"),
        _le(f"marginal_pure{tag}", marg_worst, 1e-8, f"q={qs}, n<=4"),
    ]


def check_deformation_constant(level: str = "full") -> list[CheckResult]:
    h = make_params(q=0.001).h
    return [_le("h(q=0.001,lam=1/2)", abs(h - 3.7169), 5e-4, f"h={h:.6f}")]


def check_displacement(level: str = "full") -> list[CheckResult]:
    p = make_params(q=0.001)
    out = []
    for n in (2, 6):
        spec = SuperpositionSpec.pure(n, p)
        step = p.h / 50.0
        lo, hi = -(n + 2) * p.h, 2.0 * p.h
        count = int(round((hi - lo) / step)) + 1
        ps = np.linspace(lo, hi, count)
        values = wigner_superposition(spec, 0.0, ps)
        peak = ps[int(np.argmax(values))]
        target = -n * p.h
        out.append(CheckResult(f"displacement(n={n})", abs(peak - target), ps[1] - ps[0],
                               abs(peak - target) <= ps[1] - ps[0] + 1e-12,
                               f"argmax_p={peak:.5f}, -n*h={target:.5f}"))
    return out


def check_conditional_slices(level: str = "full") -> list[CheckResult]:
    n, m = 2, 6
    p = make_params(q=0.001)
    count = 301 if level == "full" else 121
    lo, hi = -(m + 2) * _level_unit(p), 2.0 * _level_unit(p)
    axes = (Axis("xA", -1.5, 1.5, count), Axis("pA", lo, hi, count))
    out = []
    for variant, expected_level in ((BellVariant.PSI_PLUS, m), (BellVariant.PHI_PLUS, n)):
        spec = BellSpec(variant, n, m, p, p)
        slc = SliceSpec(axes, (("xB", 0.0), ("pB", conditional_center(n, p))))
        xa, pa, _ = find_peak(evaluate_slice(spec, slc))
        target = conditional_center(expected_level, p)
        err = max(abs(xa) / axes[0].step, abs(pa - target) / axes[1].step)
        out.append(_le(f"conditional_peak({variant.value})", err, 1.0,
                       f"peak=({xa:.4f},{pa:.4f}) expected=(0,{target:.4f}) [in grid steps]"))
    return out


def _slice_points(spec: BellSpec, side: int):
    p = spec.params_A
    mid = midpoint_momentum(spec.n, spec.m, p)
    xa = np.linspace(-1.5, 1.5, side)
    pa = np.linspace(mid - 3.0 * _level_unit(p), mid + 3.0 * _level_unit(p), side)
    XA, PA = np.meshgrid(xa, pa)
    return XA, PA, np.zeros_like(XA), np.full_like(XA, mid)


def check_negation(level: str = "full") -> list[CheckResult]:
    p = make_params(q=0.001)
    out = []
    for plus, minus in ((BellVariant.PSI_PLUS, BellVariant.PSI_MINUS), (BellVariant.PHI_PLUS, BellVariant.PHI_MINUS)):
        sp = BellSpec(plus, 2, 6, p, p)
        sm = sp.with_variant(minus)
        pts = _slice_points(sp, 41)
        wp = bell_wigner(sp, pts)
        wm = bell_wigner(sm, pts)
        terms = bell_terms(sp, pts)
        scale = np.abs(terms.w1) + np.abs(terms.w2) + np.abs(terms.w3)
        diff = np.max(np.abs((wp - wm) - 2.0 * terms.w2) / scale)
        summ = np.max(np.abs((wp + wm) - 2.0 * (terms.w1 + terms.w3)) / scale)
        out.append(_le(f"negation({plus.family})", max(diff, summ), 1e-12, "41x41 slice, relative"))
    return out


def check_exchange(level: str = "full") -> list[CheckResult]:
    out = []
    rng = np.random.default_rng(20240611)
    samples = 200 if level == "full" else 40
    for q, (n, m) in ((0.001, (2, 6)), (0.5, (1, 2)), (0.9, (0, 3))):
        p = make_params(q=q)
        unit = _level_unit(p)
        xa, xb = rng.uniform(-1.5, 1.5, (2, samples))
        pa, pb = rng.uniform(-(max(n, m) + 1) * unit, unit, (2, samples))
        for variant in BellVariant:
            spec = BellSpec(variant, n, m, p, p)
            w = bell_wigner(spec, (xa, pa, xb, pb))
            ws = bell_wigner(spec, (xb, pb, xa, pa))
            out.append(_le(f"exchange({variant.value},q={q})", float(np.max(np.abs(w - ws))), 1e-12))
    return out


def q_limit_distances(n: int, qs=(0.9, 0.99, 0.999)) -> list[float]:
    xs = np.linspace(-6.0, 6.0, 2401)
    out = []
    for q in qs:
        p = make_params(q=q)
        d = np.abs(psi(PureStateSpec(n, p), xs)) ** 2 - ho_reference_psi(n, p.lam, xs) ** 2
        out.append(float(np.max(np.abs(d))))
    return out


def check_q_limit(level: str = "full") -> list[CheckResult]:
    out = []
    for n in range(5):
        d = q_limit_distances(n)
        if n == 0:
            # the ground state carries no q-dependence at all
            out.append(_le("q_limit(n=0) identical", max(d), 1e-15, f"d={d}"))
            continue
        ratio = max(d[1] / d[0], d[2] / d[1])
        out.append(CheckResult(f"q_limit(n={n}) decreasing", ratio, 1.0, ratio < 1.0,
                               "d=" + ",".join(f"{v:.3e}" for v in d)))
    return out


def bell_total_integral(spec: BellSpec, nodes: int = 48) -> float:
    """Separable Gauss-Legendre quadrature of the Bell Wigner function over all four coordinates."""
    pa, pb = spec.params_A, spec.params_B
    top = max(spec.n, spec.m)
    t, wt = np.polynomial.legendre.leggauss(nodes)

    def axis(lo, hi):
        return 0.5 * (hi - lo) * t + 0.5 * (hi + lo), 0.5 * (hi - lo) * wt

    xa, wxa = axis(-_x_window(pa), _x_window(pa))
    xb, wxb = axis(-_x_window(pb), _x_window(pb))
    pa_n, wpa = axis(*_p_window(top, pa))
    pb_n, wpb = axis(*_p_window(top, pb))
    values = bell_wigner(
        spec,
        (xa[:, None, None, None], pa_n[None, :, None, None], xb[None, None, :, None], pb_n[None, None, None, :]),
    )
    return float(np.einsum("ijkl,i,j,k,l->", values, wxa, wpa, wxb, wpb))


def check_bounds(level: str = "full") -> list[CheckResult]:
    figs = figure_presets(count=301 if level == "full" else 61)
    worst = -math.inf
    for fig in figs.values():
        g = evaluate_slice(fig.target, fig.slice)
        worst = max(worst, float(np.max(np.abs(g.values))) - analytic_bound(fig.target))
    p = make_params(q=0.5)
    total = bell_total_integral(BellSpec(BellVariant.PSI_PLUS, 0, 1, p, p))
    return [
        _le("bound_excess(figure grids)", worst, 1e-9, "max|W| - 1/(pi hbar)^k"),
        _le("bell_normalization(n=0,m=1,q=0.5)", abs(total - 1.0), 1e-4, f"integral={total:.10f}"),
    ]


def write_figures(out_dir, count: int = 301, workers: int = 1, fmt: str = "both", q: float = 0.001,
                  names=FIGURE_NAMES) -> dict[str, str]:
    """Write figure grids into ``out_dir``; returns ``{filename: sha256}``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    figs = figure_presets(q=q, count=count)
    hashes = {}
    for name in names:
        fig = figs[name]
        decompose = isinstance(fig.target, BellSpec)
        g = evaluate_slice(fig.target, fig.slice, workers=workers, decompose=decompose)
        paths = []
        if fmt in ("csv", "both"):
            paths.append(write_csv(g, out_dir / f"{name}.csv", decompose=decompose))
        if fmt in ("pgm16", "both"):
            paths.extend(write_pgm16(g, out_dir / f"{name}.pgm"))
        for path in paths:
            hashes[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()
    manifest = "".join(f"{h}  {n}\n" for n, h in sorted(hashes.items()))
    (out_dir / "MANIFEST.sha256").write_text(manifest)
    return hashes


def check_figures(level: str = "full") -> list[CheckResult]:
    count = 301 if level == "full" else 41
    with tempfile.TemporaryDirectory() as tmp:
        a = write_figures(Path(tmp) / "w1", count=count, workers=1)
        b = write_figures(Path(tmp) / "w1_again", count=count, workers=1)
        c = write_figures(Path(tmp) / "w3", count=count, workers=3)
    expected = {f"{n}.csv" for n in FIGURE_NAMES} | {f"{n}.pgm" for n in FIGURE_NAMES}
    missing = expected - set(a)
    mismatched = [k for k in a if not (a[k] == b.get(k) == c.get(k))]
    return [
        _le("figure_files_missing", len(missing), 0, ",".join(sorted(missing))),
        _le("figure_hash_mismatches(runs, workers=1 vs 3)", len(mismatched), 0, ",".join(mismatched)),
    ]


ALL_CHECKS = {
    "oracle_single": check_oracle_single,
    "oracle_bell": check_oracle_bell,
    "conventions": check_conventions,
    "deformation_constant": check_deformation_constant,
    "displacement": check_displacement,
    "conditional_slices": check_conditional_slices,
    "negation": check_negation,
    "exchange": check_exchange,
    "q_limit": check_q_limit,
    "bounds": check_bounds,
    "figures": check_figures,
}


def run_checks(level: str = "fast", flip_sign: bool = False, names=None) -> list[CheckResult]:
    """Run the named checks (default all). ``flip_sign`` swaps in the negative Wigner prefactor."""
    results = []
    for name, fn in ALL_CHECKS.items():
        if names is not None and name not in names:
            continue
        if name == "conventions":
            results.extend(fn(level, prefactor_sign=-1.0 if flip_sign else 1.0))
        else:
            results.extend(fn(level))
    return results
