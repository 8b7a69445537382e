"""Truncated shot-noise series sampling and path assembly.

A realization draws ordered Poisson arrivals, signs, and window-uniform
marks, converts arrivals to jump sizes through the tail quantile, and sums
kernel translates on an output grid.  The decomposition splits each path
into the running-jump martingale part (diagonal kernel values at positive
times) and the finite-variation remainder, the latter computed both as the
identity X - X0 - M and directly through the g-split series for
cross-validation.

Only symmetric jump measures are simulated: their series centering terms
vanish by sign symmetry, so the truncation at a Poisson-arrival cap drops
exactly the smallest jumps.  Deterministic drift enters separately through
the B-function.  The Gaussian component, when present, is sampled exactly
on the grid from the joint covariance of (X_gauss, M_gauss).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import Kernel
from .measures import ModelSpec, k_kernel
from .quadrature import DEFAULT_CONFIG, DIVERGED, QuadratureConfig, integrate

INF = math.inf

_ATOM_CHUNK = 4096
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


class SimulationConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SeriesConfig:
    """Window, truncation and grid choices for one series realization.

    The reference measure for arrival marks is uniform on the window times
    the normalized mixing weights, making the arrival-to-jump-size map
    monotone within each mixing point; ``h`` is the constant half-density
    of that choice.
    """

    model: ModelSpec
    kernel: Kernel
    window_past: float
    horizon: float
    gamma_cap: float
    grid_points: int = 513
    seed: int = 0
    max_terms: int = 2_000_000
    bias_tolerance: float = 1e-3
    quad_config: QuadratureConfig = field(default_factory=lambda: DEFAULT_CONFIG)

    def __post_init__(self):
        if self.window_past <= 0:
            raise SimulationConfigError("window_past must be positive")
        if self.horizon <= 0:
            raise SimulationConfigError("horizon must be positive")
        if self.gamma_cap <= 0:
            raise SimulationConfigError("gamma_cap must be positive")
        if self.grid_points < 2:
            raise SimulationConfigError("grid_points must be at least 2")
        for p in self.model.points:
            if p.levy is not None and not p.levy.symmetric:
                raise SimulationConfigError(
                    f"jump measure at {p.label!r} is not symmetric: series "
                    "simulation is restricted to symmetric measures (their "
                    "centering terms vanish); asymmetric drivers are out of "
                    "scope")

    @property
    def h(self) -> float:
        """Half-density of the reference mark measure on the window."""
        span = self.window_past + self.horizon
        return 1.0 / (2.0 * span * self.model.total_mass())

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.grid_points)


@dataclass(frozen=True)
class SeriesState:
    """One sampled realization of the truncated series."""

    gamma: np.ndarray      # ascending Poisson arrival times
    eps: np.ndarray        # iid signs in {-1, +1}
    t1: np.ndarray         # mark times, uniform on [-window_past, horizon]
    v_index: np.ndarray    # mark labels as indices into ``labels``
    r: np.ndarray          # jump sizes from the tail quantile
    labels: tuple
    h: float
    gamma_cap: float
    seed: int

    @property
    def n_terms(self) -> int:
        return len(self.gamma)

    def label_of(self, j: int) -> str:
        return self.labels[self.v_index[j]]


@dataclass
class PathBundle:
    """Grid values of one path with its decomposition and diagnostics."""

    grid: np.ndarray
    x: np.ndarray
    m: np.ndarray
    a: np.ndarray
    a_direct: np.ndarray
    gaussian: np.ndarray | None
    jump_times: np.ndarray
    jump_sizes: np.ndarray
    jump_labels: tuple
    scale: float
    decomposition_residual: float
    a_route_disagreement: float
    truncation_bias_bound: float
    series_tail_std: float


def sample_series(config: SeriesConfig, rng=None) -> SeriesState:
    """Draw one truncated series realization; deterministic given the seed.

    Draw order is fixed (arrivals, signs, times, labels) so identical
    configurations reproduce bit-identical states.
    """
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    arrivals = []
    total = 0.0
    block = 1024
    while total <= config.gamma_cap:
        draw = rng.standard_exponential(block)
        arrivals.append(draw)
        total += float(draw.sum())
        if (len(arrivals) * block) > config.max_terms + block:
            break
    gamma = np.cumsum(np.concatenate(arrivals))
    gamma = gamma[gamma <= config.gamma_cap]
    n = len(gamma)
    if n > config.max_terms:
        raise SimulationConfigError(
            f"gamma_cap={config.gamma_cap} yields {n} series terms, above "
            f"max_terms={config.max_terms}; reduce the cap or raise the "
            "budget")
    eps = rng.integers(0, 2, size=n) * 2 - 1
    t1 = rng.uniform(-config.window_past, config.horizon, size=n)
    labels = config.model.labels
    weights = np.array([p.weight for p in config.model.points], dtype=float)
    v_index = rng.choice(len(labels), size=n, p=weights / weights.sum())

    r = np.zeros(n)
    s_values = eps * gamma * config.h
    for i, p in enumerate(config.model.points):
        mask = v_index == i
        if not mask.any():
            continue
        if p.levy is None:
            r[mask] = 0.0
        else:
            r[mask] = p.levy.tail_quantile(s_values[mask])
    return SeriesState(gamma=gamma, eps=eps.astype(np.int64), t1=t1,
                       v_index=v_index.astype(np.int64), r=r, labels=labels,
                       h=config.h, gamma_cap=config.gamma_cap,
                       seed=config.seed)


def extract_jumps(state: SeriesState, config: SeriesConfig):
    """Predicted path jumps: size R_j f(0, v_j) at each positive mark time.

    Zero-height jumps (kernels with vanishing diagonal) are omitted, so for
    such kernels the list is exactly empty.
    """
    kernel = config.kernel
    f0 = np.array([kernel.f_zero(lbl) for lbl in state.labels])
    sizes = state.r * f0[state.v_index]
    keep = (state.t1 > 0) & (state.t1 <= config.horizon) & (sizes != 0.0)
    order = np.argsort(state.t1[keep], kind="stable")
    times = state.t1[keep][order]
    vals = sizes[keep][order]
    labels = tuple(state.labels[i] for i in state.v_index[keep][order])
    return times, vals, labels


def _chunked_dot(eval_matrix, t1, r, grid, n_chunk=_ATOM_CHUNK):
    """Accumulate sum_j r_j * eval_matrix(grid, t1_j) without storing all."""
    out = np.zeros_like(grid)
    for lo in range(0, len(t1), n_chunk):
        hi = min(lo + n_chunk, len(t1))
        block = eval_matrix(grid[:, None], t1[None, lo:hi])
        out += block @ r[lo:hi]
    return out


def _f_integral(kernel: Kernel, u: np.ndarray, v, which: str,
                config: QuadratureConfig) -> np.ndarray:
    """Integral of f (or f0) over [0, u] per grid value, for drift terms."""
    fn = (lambda t: kernel.f(t, v)) if which == "f" else (
        lambda t: kernel.f0(t, v))
    out = np.zeros_like(u)
    order = np.argsort(u)
    prev_u = 0.0
    acc = 0.0
    for idx in order:
        ui = u[idx]
        if ui > prev_u:
            acc += integrate(fn, prev_u, ui, config=config).value
            prev_u = ui
        out[idx] = acc
    return out


def _drift_paths(config: SeriesConfig):
    """Deterministic components: beta(t) of X and the shift of M."""
    grid = config.grid()
    kernel, model = config.kernel, config.model
    beta = np.zeros_like(grid)
    zeta = np.zeros_like(grid)
    if not model.has_drift:
        return beta, zeta
    S = config.window_past
    for p in model.points:
        if p.drift == 0:
            continue
        coeff = p.weight * p.drift
        # integral of phi(t, s, v) over the window equals
        # int_0^{t+S} f - int_0^S f0 by the substitution u = t - s.
        f_int = _f_integral(kernel, grid + S, p.label, "f", config.quad_config)
        f0_int = _f_integral(kernel, np.array([S]), p.label, "f0",
                             config.quad_config)[0]
        beta += coeff * (f_int - f0_int)
        zeta += coeff * kernel.f_zero(p.label) * grid
    return beta, zeta


def _gaussian_joint(config: SeriesConfig, rng):
    """Exact joint draw of the Gaussian parts of X and M on the grid.

    The covariance blocks are assembled from a composite Gauss-Legendre rule
    whose panel boundaries include every grid point (where the kernel kinks
    sit), then passed through a symmetric eigenvalue square root.
    """
    grid = config.grid()
    n = len(grid)
    S = config.window_past
    dt = grid[1] - grid[0] if n > 1 else config.horizon
    n_neg = int(min(max(math.ceil(S / max(dt, 1e-12)), 4), 4 * n))
    neg_edges = np.linspace(-S, 0.0, n_neg + 1)
    edges = np.concatenate([neg_edges[:-1], grid])
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    pos_panel = np.repeat(edges[:-1] >= 0.0, len(_GL_NODES))

    c_xx = np.zeros((n, n))
    c_mm = np.zeros((n, n))
    c_xm = np.zeros((n, n))
    tmin = np.minimum.outer(grid, grid)
    for p in config.model.points:
        if p.gaussian_var == 0:
            continue
        w = p.weight * p.gaussian_var
        f0 = config.kernel.f_zero(p.label)
        phi_nodes = config.kernel.phi(grid[:, None], nodes[None, :], p.label)
        c_xx += w * (phi_nodes * wts) @ phi_nodes.T
        c_mm += w * f0 * f0 * tmin
        # integral of phi(t_i, s) over (0, t_j]: positive-side panels only,
        # accumulated panel by panel (panels align with the grid).
        pos_w = np.where(pos_panel, wts, 0.0)
        contrib = phi_nodes * pos_w
        panel_sum = contrib.reshape(n, len(edges) - 1, len(_GL_NODES)).sum(
            axis=2)
        pos_cum = np.cumsum(panel_sum[:, n_neg:], axis=1)
        c_xm[:, 1:] += w * f0 * pos_cum
    big = np.empty((2 * n, 2 * n))
    big[:n, :n] = c_xx
    big[:n, n:] = c_xm
    big[n:, :n] = c_xm.T
    big[n:, n:] = c_mm
    big = 0.5 * (big + big.T)
    evals, evecs = np.linalg.eigh(big)
    evals = np.clip(evals, 0.0, None)
    z = rng.standard_normal(2 * n)
    draw = evecs @ (np.sqrt(evals) * z)
    return draw[:n], draw[n:]


def truncation_bias_bound(config: SeriesConfig) -> float:
    """Std bound for the mass discarded left of the window: the square root
    of the K-kernel integral over s < -window_past at the horizon."""
    kernel, model = config.kernel, config.model
    T = config.horizon
    total = 0.0
    for p in model.points:
        def integrand(s, lbl=p.label):
            return np.asarray(
                k_kernel(kernel.phi(T, s, lbl), lbl, model), dtype=float)

        res = integrate(integrand, -INF, -config.window_past,
                        config=config.quad_config)
        total += p.weight * (INF if res.status == DIVERGED else res.value)
    return math.sqrt(total)


def series_tail_std(config: SeriesConfig) -> float:
    """Std bound for the omitted series tail beyond the arrival cap.

    Jumps smaller than the cap quantile carry second moment bounded by the
    truncated second moment at that quantile, integrated against the
    squared kernel over the window.
    """
    kernel, model = config.kernel, config.model
    T = config.horizon
    total = 0.0
    for p in model.points:
        if p.levy is None:
            continue
        q = abs(p.levy.tail_quantile(config.gamma_cap * config.h))
        if q == 0.0:
            continue
        second = p.levy.truncated_second_moment(q)

        def phi_sq(s, lbl=p.label):
            return np.asarray(kernel.phi(T, s, lbl), dtype=float) ** 2

        res = integrate(phi_sq, -config.window_past, T,
                        config=config.quad_config, split_points=[0.0])
        total += p.weight * second * res.value
    return math.sqrt(total)


def build_paths(state: SeriesState, config: SeriesConfig,
                rng=None, check_bias: bool = True) -> PathBundle:
    """Assemble X, M and both A-routes on the output grid.

    M collects the diagonal kernel value of every atom with positive mark
    time plus the deterministic shift; A is X - X0 - M, cross-validated by
    the direct g-split series.  With ``check_bias`` the window-truncation
    bound is compared against the realized path scale.
    """
    kernel, model = config.kernel, config.model
    grid = config.grid()
    beta, zeta = _drift_paths(config)

    x = beta.copy()
    a_direct = np.zeros_like(grid)
    for i, lbl in enumerate(state.labels):
        mask = state.v_index == i
        if not mask.any():
            continue
        t1 = state.t1[mask]
        r = state.r[mask]
        x += _chunked_dot(lambda t, s, lbl=lbl: kernel.phi(t, s, lbl),
                          t1, r, grid)
        if kernel.supports_g_split:
            g_at = lambda t, s, lbl=lbl: kernel.g(t - s, lbl) - kernel.g(
                -s, lbl)
            a_direct += _chunked_dot(g_at, t1, r, grid)
        else:
            base = kernel.phi(np.maximum(t1, 0.0), t1, lbl)
            a_direct += _chunked_dot(
                lambda t, s, lbl=lbl: kernel.phi(t, s, lbl), t1, r, grid)
            a_direct -= np.sum(r * base)

    jump_times, jump_sizes, jump_labels = extract_jumps(state, config)
    m = np.zeros_like(grid)
    if len(jump_times):
        cum = np.concatenate([[0.0], np.cumsum(jump_sizes)])
        idx = np.searchsorted(jump_times, grid, side="right")
        m = cum[idx]
    m = m + zeta
    a_direct += beta - beta[0] - zeta

    gaussian = None
    if model.has_gaussian:
        rng = rng if rng is not None else np.random.default_rng(state.seed + 1)
        xg, mg = _gaussian_joint(config, rng)
        gaussian = xg
        x = x + xg
        m = m + mg
        a_direct = a_direct + (xg - xg[0]) - mg

    a = x - x[0] - m
    scale = float(np.max(np.abs(x)))
    residual = float(np.max(np.abs(x - x[0] - m - a)))
    disagreement = float(np.max(np.abs(a - a_direct)))
    bias = truncation_bias_bound(config)
    tail_std = series_tail_std(config)
    if check_bias and scale > 0 and bias > config.bias_tolerance * scale:
        raise SimulationConfigError(
            f"window truncation bound {bias:.3e} exceeds "
            f"{config.bias_tolerance:.0e} of the path scale {scale:.3e}; "
            "increase window_past")
    return PathBundle(grid=grid, x=x, m=m, a=a, a_direct=a_direct,
                      gaussian=gaussian, jump_times=jump_times,
                      jump_sizes=jump_sizes, jump_labels=jump_labels,
                      scale=scale, decomposition_residual=residual,
                      a_route_disagreement=disagreement,
                      truncation_bias_bound=bias, series_tail_std=tail_std)


def simulate_path(config: SeriesConfig) -> PathBundle:
    """Sample a series and build its paths with one call."""
    rng = np.random.default_rng(config.seed)
    state = sample_series(config, rng=rng)
    return build_paths(state, config, rng=rng)


def _component(path, which: str) -> np.ndarray:
    if isinstance(path, PathBundle):
        values = {"X": path.x, "M": path.m, "A": path.a,
                  "G": path.gaussian}[which.upper()]
        if values is None:
            raise ValueError("path has no gaussian component")
        return values
    return np.asarray(path, dtype=float)


def max_refinement_level(n_points: int) -> int:
    """Largest dyadic level representable on a grid of n_points."""
    n = n_points - 1
    level = 0
    while n % 2 == 0 and n > 1:
        n //= 2
        level += 1
    return level


def realized_variation(path, which: str = "X", order: int = 1,
                       refinement_level: int | None = None) -> float:
    """Power variation over a dyadic subgrid.

    ``refinement_level`` counts dyadic halvings from the coarsest two-point
    grid; None means the finest level the grid supports.  Order 1 sums
    absolute increments, order 2 their squares.
    """
    values = _component(path, which)
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    n = len(values) - 1
    max_level = max_refinement_level(len(values))
    level = max_level if refinement_level is None else int(refinement_level)
    if level > max_level or level < 0:
        raise ValueError(
            f"refinement level {level} exceeds grid resolution ({max_level})")
    stride = 2 ** (max_level - level)
    sub = values[::stride]
    inc = np.diff(sub)
    return float(np.sum(np.abs(inc) if order == 1 else inc * inc))
