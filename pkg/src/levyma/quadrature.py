"""Adaptive quadrature for improper integrals with power-law behavior.

The engine lays 15-point Gauss-Kronrod panels over geometrically spaced
shells toward interval endpoints and geometrically growing windows toward
infinity.  For integrands that behave like a power law near an endpoint or
in a tail, consecutive shell/window contributions form a near-geometric
series, so the sweep can extrapolate a convergent tail to high accuracy and,
symmetrically, detect divergence from a stabilized contribution ratio.

Supported class: piecewise-smooth integrands with power-law endpoint
behavior of exponent > -1 and power-law or faster-decaying tails.  Known
kinks or discontinuities should be passed as split points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

CONVERGED = "converged"
DIVERGED = "diverged"
MAX_REFINEMENT = "max_refinement"

# Contribution ratios at or above 1 - _RATIO_EPS signal a non-summable tail.
_RATIO_EPS = 1e-6
# Largest |ratio| still eligible for geometric tail extrapolation.
_EXTRAP_MAX_RATIO = 0.99999
# Sustained ratio observations required before probing for divergence.
_DIVERGENCE_RUN = 4
# Scale factor (in powers of the growth base) for the divergence probe.
_PROBE_DEPTH = 25
_OVERFLOW_GUARD = 1e250

# 15-point Kronrod nodes on [-1, 1] (symmetric; only the nonnegative half
# is stored) with Kronrod weights, and the embedded 7-point Gauss weights.
_XGK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 ascending nodes
_WEIGHTS_K = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[1:-1:2] = np.concatenate([_WG[:-1], _WG[::-1]])


class IntegrandError(ValueError):
    """Raised when an integrand returns NaN (or an interior non-finite value)."""


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_panels: int = 4096
    window_growth_factor: float = 2.0
    split_points: tuple[float, ...] = ()
    divergence_slope_threshold: float = 0.1

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_panels < 64:
            raise ValueError("max_panels must be at least 64")
        if self.window_growth_factor <= 1:
            raise ValueError("window_growth_factor must exceed 1")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    status: str
    slope: float | None = None

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    @property
    def diverged(self) -> bool:
        return self.status == DIVERGED

    @property
    def finite(self) -> bool:
        return self.status != DIVERGED and math.isfinite(self.value)


def _ensure_vectorized(f):
    probe = np.array([0.5, 0.25])
    try:
        out = f(probe)
        out = np.asarray(out, dtype=float)
        if out.shape == probe.shape:
            return f
    except (TypeError, ValueError, IndexError):
        pass
    vf = np.vectorize(f, otypes=[float])
    return lambda x: vf(x)


class _Budget:
    """Shared panel counter for one integrate() call."""

    def __init__(self, max_panels: int):
        self.left = max_panels
        self.exhausted = False

    def take(self, n: int = 1) -> bool:
        if self.left < n:
            self.exhausted = True
            return False
        self.left -= n
        return True


def _gk_panel(f, a: float, b: float):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _NODES
    fx = np.asarray(f(x), dtype=float)
    if np.isnan(fx).any():
        bad = x[np.isnan(fx)][0]
        raise IntegrandError(f"integrand returned NaN at x={bad!r}")
    if np.isinf(fx).any():
        # Overflow inside a panel; caller treats the piece as blowing up.
        return math.inf, math.inf
    k = half * float(np.dot(_WEIGHTS_K, fx))
    g = half * float(np.dot(_WEIGHTS_G, fx))
    err = abs(k - g) + 5e-17 * abs(k)
    return k, err


def _adaptive_panel(f, a: float, b: float, tol_abs: float, rel_tol: float,
                    budget: _Budget):
    """Refine [a, b] by bisection until the GK error estimate meets the
    larger of tol_abs and rel_tol times the panel value."""
    if not budget.take():
        return 0.0, math.inf
    v, e = _gk_panel(f, a, b)
    if not math.isfinite(v):
        return v, e
    work = [(e, a, b, v)]
    total_v, total_e = v, e
    while total_e > max(tol_abs, rel_tol * abs(total_v)):
        work.sort(key=lambda t: t[0])
        e0, lo, hi, v0 = work.pop()
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or not budget.take(2):
            work.append((e0, lo, hi, v0))
            break
        v1, e1 = _gk_panel(f, lo, mid)
        v2, e2 = _gk_panel(f, mid, hi)
        if not (math.isfinite(v1) and math.isfinite(v2)):
            return math.inf, math.inf
        work.append((e1, lo, mid, v1))
        work.append((e2, mid, hi, v2))
        total_v = sum(t[3] for t in work)
        total_e = sum(t[0] for t in work)
    return total_v, total_e


@dataclass
class _Accumulator:
    """Running value/error across all pieces, shared for tolerance floors."""

    config: QuadratureConfig
    value: float = 0.0
    error: float = 0.0
    statuses: list = field(default_factory=list)
    slope: float | None = None

    def local_floor(self, extra: float = 0.0) -> float:
        scale = abs(self.value) + abs(extra)
        return max(self.config.abs_tol, self.config.rel_tol * scale) * 0.25

    def add(self, value, error, status, slope=None):
        self.value += value
        self.error += error
        self.statuses.append(status)
        if status == DIVERGED and slope is not None:
            self.slope = slope


def _geometric_sweep(f, intervals, acc: _Accumulator, budget: _Budget,
                     base: float, slope_threshold: float, probe=None):
    """Integrate a geometric sequence of intervals, extrapolating the tail.

    ``intervals`` yields (lo, hi) pairs whose widths scale by ``base`` per
    step (shrinking toward an endpoint or growing toward infinity).
    ``probe(lo, hi)`` estimates the contribution well beyond the current
    depth; it arbitrates between genuine divergence and growth that is about
    to stall (a singularity near, but off, the anchor).  Returns
    (value, error, status, slope).
    """
    vals: list[float] = []
    total = 0.0
    err = 0.0
    log_base = math.log(base)
    ratio_run = 0
    strong_run = 0
    small_run = 0
    last_ratio = None

    for lo, hi in intervals:
        floor = acc.local_floor(extra=total)
        v, e = _adaptive_panel(f, lo, hi, 0.1 * floor,
                               0.2 * acc.config.rel_tol, budget)
        if not math.isfinite(v):
            return total, err, DIVERGED, math.inf
        vals.append(v)
        total += v
        err += e
        if abs(total) > _OVERFLOW_GUARD:
            slope = math.log(abs(last_ratio)) / log_base if last_ratio else None
            return total, err, DIVERGED, slope

        if abs(v) <= 0.02 * floor:
            small_run += 1
            ratio_run = 0
            strong_run = 0
            if small_run >= 3:
                return total, err + 2.0 * abs(v), CONVERGED, None
            continue
        small_run = 0

        if len(vals) >= 2 and vals[-2] != 0.0:
            r = vals[-1] / vals[-2]
            last_ratio = r
            if abs(r) >= 1.0 - _RATIO_EPS:
                ratio_run += 1
            else:
                ratio_run = 0
            if r >= 1.5:
                strong_run += 1
            else:
                strong_run = 0
            slope = math.log(abs(r)) / log_base if r != 0 else None
            fired = (ratio_run >= _DIVERGENCE_RUN
                     or (strong_run >= 3 and slope is not None
                         and slope >= slope_threshold))
            if fired:
                # Under a power-law divergence the contribution at any depth
                # stays comparable to the current one; a collapsing probe
                # means the growth is about to stall (singularity off-anchor).
                if probe is None or probe(lo, hi) >= 0.5 * abs(vals[-1]):
                    return total, err, DIVERGED, slope
                ratio_run = 0
                strong_run = 0
            # Tail extrapolation once the ratio has stabilized below 1.
            if len(vals) >= 4 and 0 < abs(r) <= _EXTRAP_MAX_RATIO:
                rs = [vals[i] / vals[i - 1]
                      for i in range(len(vals) - 3, len(vals))
                      if vals[i - 1] != 0.0]
                if len(rs) == 3 and all(0 < abs(q) <= _EXTRAP_MAX_RATIO
                                        for q in rs):
                    spread = max(rs) - min(rs)
                    tail = vals[-1] * r / (1.0 - r)
                    tail_err = abs(vals[-1]) * spread / (1.0 - abs(r)) ** 2 \
                        + 1e-14 * abs(tail)
                    if tail_err <= floor:
                        return total + tail, err + tail_err, CONVERGED, None
        if budget.exhausted:
            return total, err, MAX_REFINEMENT, None
    return total, err, MAX_REFINEMENT, None


def _shells_toward(anchor: float, other: float, base: float):
    """Intervals covering (anchor, other], shrinking geometrically to anchor."""
    width = other - anchor  # may be negative when approaching from above
    k = 0
    while True:
        hi = anchor + width * base ** (-k)
        lo = anchor + width * base ** (-k - 1)
        if hi == anchor or lo == hi or k > 2000:
            return
        yield (min(lo, hi), max(lo, hi))
        k += 1


def _windows_from(start: float, width0: float, base: float):
    """Intervals covering [start + width0, infinity), widths growing by base."""
    lo = start + width0
    k = 1
    while True:
        hi = start + width0 * base ** k
        if not math.isfinite(hi) or hi <= lo or k > 2000:
            return
        yield (lo, hi)
        lo = hi
        k += 1


def _probe_eval(f, x: float) -> float:
    try:
        return abs(float(np.asarray(f(np.array([x])), dtype=float)[0]))
    except (IntegrandError, FloatingPointError, OverflowError):
        return math.inf


def _shell_probe(f, anchor: float, base: float):
    def probe(lo: float, hi: float) -> float:
        dist = lo - anchor if anchor <= lo else anchor - hi
        deep = dist * base ** (-_PROBE_DEPTH)
        x = anchor + deep if anchor <= lo else anchor - deep
        if x == anchor:
            return 0.0
        return _probe_eval(f, x) * deep
    return probe


def _window_probe(f, base: float):
    def probe(lo: float, hi: float) -> float:
        deep = min(abs(hi) * base ** _PROBE_DEPTH, 1e300)
        x = math.copysign(deep, hi)
        return _probe_eval(f, x) * deep
    return probe


def _finite_segment(f, p: float, q: float, acc: _Accumulator, budget: _Budget,
                    base: float, slope_threshold: float):
    mid = 0.5 * (p + q)
    if not (p < mid < q):
        v, e = _adaptive_panel(f, p, q, acc.local_floor(),
                               0.2 * acc.config.rel_tol, budget)
        acc.add(v, e, CONVERGED if math.isfinite(v) else DIVERGED)
        return
    for anchor, other in ((p, mid), (q, mid)):
        v, e, status, slope = _geometric_sweep(
            f, _shells_toward(anchor, other, base), acc, budget, base,
            slope_threshold, probe=_shell_probe(f, anchor, base))
        acc.add(v, e, status, slope)
        if status == DIVERGED:
            return


def _half_line(f, p: float, acc: _Accumulator, budget: _Budget, base: float,
               slope_threshold: float):
    width0 = max(1.0, abs(p))
    _finite_segment(f, p, p + width0, acc, budget, base, slope_threshold)
    if DIVERGED in acc.statuses:
        return
    v, e, status, slope = _geometric_sweep(
        f, _windows_from(p, width0, base), acc, budget, base, slope_threshold,
        probe=_window_probe(f, base))
    acc.add(v, e, status, slope)


def integrate(f, a: float, b: float, config: QuadratureConfig | None = None,
              split_points=()) -> QuadResult:
    """Integrate f over (a, b), either endpoint possibly infinite.

    Returns a QuadResult whose status is ``converged`` when the accumulated
    error estimate meets max(rel_tol * |value|, abs_tol), ``diverged`` when a
    non-summable power-law tail or endpoint is detected (with the growth
    slope per window doubling attached), and ``max_refinement`` otherwise.
    """
    cfg = config or DEFAULT_CONFIG
    if a == b:
        return QuadResult(0.0, 0.0, CONVERGED)
    if a > b:
        raise ValueError("integration bounds must satisfy a <= b")

    f = _ensure_vectorized(f)
    budget = _Budget(cfg.max_panels)
    acc = _Accumulator(cfg)
    base = cfg.window_growth_factor
    thr = cfg.divergence_slope_threshold

    splits = sorted({float(s) for s in (*cfg.split_points, *split_points)
                     if a < s < b})
    # Unbounded domains are anchored at a finite split (0 by default).
    if math.isinf(a) and math.isinf(b) and not splits:
        splits = [0.0]

    knots: list[float] = [a, *splits, b]
    for lo, hi in zip(knots[:-1], knots[1:]):
        if DIVERGED in acc.statuses:
            break
        if math.isinf(lo) and math.isinf(hi):
            raise ValueError("cannot integrate over a doubly infinite piece")
        if math.isinf(hi):
            _half_line(f, lo, acc, budget, base, thr)
        elif math.isinf(lo):
            _half_line(lambda x: f(-x), -hi, acc, budget, base, thr)
        else:
            _finite_segment(f, lo, hi, acc, budget, base, thr)

    if DIVERGED in acc.statuses:
        return QuadResult(acc.value, acc.error, DIVERGED, acc.slope)
    tol = max(cfg.abs_tol, cfg.rel_tol * abs(acc.value))
    if MAX_REFINEMENT in acc.statuses or acc.error > tol:
        return QuadResult(acc.value, acc.error, MAX_REFINEMENT)
    return QuadResult(acc.value, acc.error, CONVERGED)
