"""Moving-average kernel families and their derivative/g-split machinery.

A kernel holds the pair (f, f0) with f(s, v) = f0(s, v) = 0 for s < 0 and
f(., v) cadlag, evaluated as phi(t, s, v) = f(t - s, v) - f0(-s, v).  The
g-split g(s, v) = f(s, v) - f(0, v) 1{s >= 0} separates the continuous part
of the kernel from the diagonal jump height f(0, v); the latter is what each
series atom contributes to the martingale component.

Absolute continuity is a *declared* property: a family either ships a
derivative or it does not, and downstream criteria treat a missing
derivative as the failure path of the necessity theorem.  A quadrature
check of the fundamental theorem of calculus is provided as a validator.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .quadrature import DEFAULT_CONFIG, DIVERGED, integrate

INF = math.inf


class NoDerivativeError(ValueError):
    """The kernel family does not declare a derivative."""


class UnsupportedKernelError(ValueError):
    """Operation undefined for this kernel family (e.g. g-split of a raw phi)."""


class Kernel:
    """Base class for SIMMA-type kernels given by (f, f0)."""

    family = "simma"
    has_derivative = False
    supports_g_split = True

    # --- pointwise surface (vectorized over the time argument) -----------
    def f(self, t, v):
        raise NotImplementedError

    def f0(self, t, v):
        t = np.asarray(t, dtype=float)
        return np.zeros_like(t)

    def f_zero(self, v) -> float:
        """Diagonal value f(0, v): the jump height of a series atom."""
        return float(self.f(0.0, v))

    def phi(self, t, s, v):
        """Kernel value phi(t, s, v) = f(t-s, v) - f0(-s, v)."""
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        out = self.f(t - s, v) - self.f0(-s, v)
        return float(out) if np.ndim(out) == 0 else out

    def diag(self, s, v):
        """phi(s+, s, v): the value picked up at the diagonal."""
        s = np.asarray(s, dtype=float)
        out = self.f_zero(v) - self.f0(-s, v)
        return float(out) if np.ndim(out) == 0 else out

    def g(self, s, v):
        s = np.asarray(s, dtype=float)
        out = self.f(s, v) - self.f_zero(v) * (s >= 0)
        return float(out) if np.ndim(out) == 0 else out

    def g_split(self):
        """Return (g, jump_height) with g(s, v) = f(s, v) - f(0, v) 1{s>=0}."""
        if not self.supports_g_split:
            raise UnsupportedKernelError(
                f"{self.family} kernel has no canonical g-split")
        return self.g, self.f_zero

    def fdot(self, t, v):
        raise NoDerivativeError(f"{self.family} kernel declares no derivative")

    # --- derivative integrals used by the criteria ------------------------
    def fdot_kink_times(self, level: float, v) -> tuple[float, ...]:
        """Times where |fdot(t, v)| crosses ``level`` (split points)."""
        return ()

    def fdot_square_integral(self, v, config=None) -> float:
        """Integral of fdot(t, v)^2 over (0, inf); inf when divergent."""
        if not self.has_derivative:
            raise NoDerivativeError(f"{self.family} kernel declares no derivative")
        res = integrate(lambda t: self.fdot(t, v) ** 2, 0.0, INF,
                        config=config or DEFAULT_CONFIG)
        return INF if res.status == DIVERGED else res.value

    def fdot_abs_power_integral(self, p: float, v, config=None) -> float:
        """Integral of |fdot(t, v)|^p over (0, inf); inf when divergent."""
        if not self.has_derivative:
            raise NoDerivativeError(f"{self.family} kernel declares no derivative")
        res = integrate(lambda t: np.abs(self.fdot(t, v)) ** p, 0.0, INF,
                        config=config or DEFAULT_CONFIG)
        return INF if res.status == DIVERGED else res.value

    def fdot_min_power_integral(self, p: float, v, config=None) -> float:
        """Integral of |fdot|^p ^ |fdot|^2 over (0, inf); inf when divergent."""
        if not self.has_derivative:
            raise NoDerivativeError(f"{self.family} kernel declares no derivative")
        res = integrate(
            lambda t: np.minimum(np.abs(self.fdot(t, v)) ** p,
                                 self.fdot(t, v) ** 2),
            0.0, INF, config=config or DEFAULT_CONFIG,
            split_points=self.fdot_kink_times(1.0, v))
        return INF if res.status == DIVERGED else res.value

    def describe(self) -> dict:
        return {"family": self.family}

    def labels_hint(self):
        """Labels this kernel carries per-v parameters for (None = uniform)."""
        return None


def _per_v(param, v, name: str) -> float:
    if isinstance(param, dict):
        try:
            return float(param[v])
        except KeyError:
            raise KeyError(f"kernel parameter {name} has no entry for label {v!r}")
    return float(param)


class FractionalKernel(Kernel):
    """Power kernel f(t, v) = t_+^gamma(v) with f0 = f.

    The diagonal value vanishes, so paths pick up no jumps from the series
    atoms; all action sits in the finite-variation question.
    """

    family = "fractional"
    has_derivative = True

    def __init__(self, gamma):
        self._gamma = gamma
        for g in (gamma.values() if isinstance(gamma, dict) else [gamma]):
            if g <= 0:
                raise ValueError("fractional exponent gamma must be positive")
            if g >= 1:
                warnings.warn(
                    f"fractional exponent gamma={g} >= 1 accepted but the "
                    "process cannot be well-defined over a nontrivial random "
                    "measure", UserWarning, stacklevel=2)

    def describe(self):
        return {"family": self.family, "gamma": self._gamma}

    def labels_hint(self):
        return tuple(self._gamma) if isinstance(self._gamma, dict) else None

    def gamma_of(self, v) -> float:
        return _per_v(self._gamma, v, "gamma")

    def f(self, t, v):
        g = self.gamma_of(v)
        t = np.asarray(t, dtype=float)
        out = np.where(t > 0, np.maximum(t, 0.0) ** g, 0.0)
        return float(out) if out.ndim == 0 else out

    def f0(self, t, v):
        return self.f(t, v)

    def f_zero(self, v) -> float:
        return 0.0

    def fdot(self, t, v):
        g = self.gamma_of(v)
        t = np.asarray(t, dtype=float)
        out = g * np.where(t > 0, t, np.nan) ** (g - 1.0)
        return float(out) if out.ndim == 0 else out

    def fdot_kink_times(self, level: float, v):
        g = self.gamma_of(v)
        return ((g / level) ** (1.0 / (1.0 - g)),) if g < 1 else ()

    def min_power_constant(self, v) -> float:
        """C with the time integral of |x fdot| ^ |x fdot|^2 equal to
        C |x|^(1/(1-gamma)); finite exactly for gamma in (0, 1/2)."""
        g = self.gamma_of(v)
        if not 0.0 < g < 0.5:
            return INF
        return g ** (1.0 / (1.0 - g)) * (1.0 / g + 1.0 / (1.0 - 2.0 * g))

    def min_abs_integral(self, x: float, v) -> float:
        """Closed form of the time integral of |x fdot| ^ |x fdot|^2."""
        C = self.min_power_constant(v)
        if not math.isfinite(C):
            return INF if x != 0 else 0.0
        g = self.gamma_of(v)
        return C * abs(x) ** (1.0 / (1.0 - g))

    def fdot_square_integral(self, v, config=None) -> float:
        # Exponent 2(gamma-1) is <= -1 at zero for gamma <= 1/2 and >= -1 at
        # infinity otherwise, so the integral never converges.
        return INF

    def fdot_abs_power_integral(self, p: float, v, config=None) -> float:
        # The exponent (gamma-1)p must exceed -1 at zero and fall below -1
        # at infinity; no gamma satisfies both.
        return INF

    def fdot_min_power_integral(self, p: float, v, config=None) -> float:
        g = self.gamma_of(v)
        lo_exp = (g - 1.0) * min(p, 2.0)   # active branch where fdot blows up
        hi_exp = (g - 1.0) * max(p, 2.0)   # active branch where fdot decays
        if lo_exp <= -1.0 or hi_exp >= -1.0:
            return INF
        res = integrate(
            lambda t: np.minimum(np.abs(self.fdot(t, v)) ** p,
                                 self.fdot(t, v) ** 2.0),
            0.0, INF, config=config or DEFAULT_CONFIG,
            split_points=self.fdot_kink_times(1.0, v))
        return INF if res.status == DIVERGED else res.value


class ExpMAKernel(Kernel):
    """Exponential moving-average kernel f(t) = exp(-theta t), f0 = 0."""

    family = "exp_ma"
    has_derivative = True

    def __init__(self, theta):
        self._theta = theta
        for th in (theta.values() if isinstance(theta, dict) else [theta]):
            if th <= 0:
                raise ValueError("decay rate theta must be positive")

    def describe(self):
        return {"family": self.family, "theta": self._theta}

    def labels_hint(self):
        return tuple(self._theta) if isinstance(self._theta, dict) else None

    def theta_of(self, v) -> float:
        return _per_v(self._theta, v, "theta")

    def f(self, t, v):
        th = self.theta_of(v)
        t = np.asarray(t, dtype=float)
        out = np.where(t >= 0, np.exp(-th * np.maximum(t, 0.0)), 0.0)
        return float(out) if out.ndim == 0 else out

    def f_zero(self, v) -> float:
        return 1.0

    def fdot(self, t, v):
        th = self.theta_of(v)
        t = np.asarray(t, dtype=float)
        out = -th * np.exp(-th * t)
        return float(out) if out.ndim == 0 else out

    def fdot_kink_times(self, level: float, v):
        th = self.theta_of(v)
        if th <= level:
            return ()
        return (math.log(th / level) / th,)

    def fdot_square_integral(self, v, config=None) -> float:
        return self.theta_of(v) / 2.0

    def fdot_abs_power_integral(self, p: float, v, config=None) -> float:
        th = self.theta_of(v)
        return th ** (p - 1.0) / p


class SimmaKernel(Kernel):
    """User-supplied (f, f0) pair with an optionally declared derivative.

    ``f`` and ``f0`` are callables of (t, v) accepting numpy arrays in t;
    causality (zero on t < 0) is enforced on evaluation.  Pass ``fdot`` only
    when f(., v) really is absolutely continuous with that derivative; the
    declaration can be spot-checked with ``validate_derivative``.
    """

    family = "simma"

    def __init__(self, f, f0=None, fdot=None):
        self._f = f
        self._f0 = f0
        self._fdot = fdot
        self.has_derivative = fdot is not None

    def describe(self):
        return {"family": self.family, "has_derivative": self.has_derivative}

    def f(self, t, v):
        t = np.asarray(t, dtype=float)
        out = np.where(t >= 0, np.asarray(self._f(t, v), dtype=float), 0.0)
        return float(out) if out.ndim == 0 else out

    def f0(self, t, v):
        if self._f0 is None:
            t = np.asarray(t, dtype=float)
            return np.zeros_like(t)
        t = np.asarray(t, dtype=float)
        out = np.where(t >= 0, np.asarray(self._f0(t, v), dtype=float), 0.0)
        return float(out) if out.ndim == 0 else out

    def fdot(self, t, v):
        if self._fdot is None:
            raise NoDerivativeError("simma kernel declares no derivative")
        t = np.asarray(t, dtype=float)
        out = np.asarray(self._fdot(t, v), dtype=float)
        return float(out) if out.ndim == 0 else out


class GeneralPhiKernel(Kernel):
    """Raw kernel phi(t, s, v) with an explicitly supplied diagonal.

    No canonical g-split or derivative exists for this family; criteria fall
    back to their most conservative paths.
    """

    family = "general_phi"
    has_derivative = False
    supports_g_split = False

    def __init__(self, phi, diag):
        self._phi = phi
        self._diag = diag

    def describe(self):
        return {"family": self.family}

    def f(self, t, v):
        raise UnsupportedKernelError("general phi kernel has no (f, f0) pair")

    def phi(self, t, s, v):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        out = np.where(s <= t, np.asarray(self._phi(t, s, v), dtype=float), 0.0)
        return float(out) if np.ndim(out) == 0 else out

    def diag(self, s, v):
        s = np.asarray(s, dtype=float)
        out = np.asarray(self._diag(s, v), dtype=float)
        return float(out) if np.ndim(out) == 0 else out

    def f_zero(self, v) -> float:
        return float(self._diag(0.0, v))


def indicator_kernel(width: float = 1.0) -> SimmaKernel:
    """f = 1_[0, width]: cadlag, finite variation, not absolutely continuous."""
    if width <= 0:
        raise ValueError("indicator width must be positive")

    def f(t, v):
        t = np.asarray(t, dtype=float)
        return ((t >= 0) & (t <= width)).astype(float)

    return SimmaKernel(f=f, f0=None, fdot=None)


def phi(kernel: Kernel, t, s, v):
    """Module-level alias for Kernel.phi."""
    return kernel.phi(t, s, v)


def g_split(kernel: Kernel):
    """Module-level alias for Kernel.g_split."""
    return kernel.g_split()


def fdot_eval(kernel: Kernel, t, v):
    """Evaluate the declared derivative at t > 0; NoDerivativeError if absent."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError("derivative evaluation requires t > 0")
    return kernel.fdot(t, v)


def validate_derivative(kernel: Kernel, v, a: float = 0.1, b: float = 5.0,
                        n_checks: int = 5, rel_tol: float = 1e-7,
                        config=None) -> float:
    """Fundamental-theorem spot check of a declared derivative.

    Verifies f(b') - f(a') = integral of fdot over [a', b'] on a grid of
    subintervals; returns the worst relative discrepancy and raises if it
    exceeds rel_tol.
    """
    if not kernel.has_derivative:
        raise NoDerivativeError("kernel declares no derivative to validate")
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    pts = np.linspace(a, b, n_checks + 1)
    worst = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        res = integrate(lambda t: kernel.fdot(t, v), lo, hi,
                        config=config or DEFAULT_CONFIG)
        lhs = float(kernel.f(hi, v) - kernel.f(lo, v))
        scale = max(abs(lhs), abs(res.value), 1e-30)
        worst = max(worst, abs(lhs - res.value) / scale)
    if worst > rel_tol:
        raise ValueError(
            f"declared derivative fails the fundamental-theorem check "
            f"(worst relative discrepancy {worst:.3e})")
    return worst
