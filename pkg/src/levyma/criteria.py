"""Semimartingale criteria and the verdict decision procedure.

The sufficiency test asks for a declared kernel derivative whose squared
and jump-response time integrals are finite; the necessity tests only bind
when every mixing point carries an infinite-variation driver (positive
Gaussian variance or non-integrable small jumps).  The two meet exactly for
drivers whose tail-to-truncated-moment ratio stays bounded, which is when a
definite negative verdict is available; otherwise the honest outcome is
``Inconclusive``.  Closed-form family rules (fractional kernels, stable and
tempered stable moving averages) shortcut the general machinery and are
definite in both directions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import FractionalKernel, Kernel, UnsupportedKernelError
from .measures import (LevyMeasure, ModelSpec, PointMassMeasure, StableMeasure,
                       TemperedStableMeasure, b_kernel)
from .quadrature import DEFAULT_CONFIG, DIVERGED, QuadratureConfig, integrate

INF = math.inf

SEMIMARTINGALE = "Semimartingale"
NOT_SEMIMARTINGALE = "NotSemimartingale"
INCONCLUSIVE = "Inconclusive"

ROLE_GATE = "gate"
ROLE_SUFFICIENT = "sufficient"
ROLE_NECESSARY = "necessary"

CONDITION_ORDER = ("drift4", "int1", "Cf", "invar_con", "trunc_case",
                   "u0", "u00", "fdot_int", "special_semimartingale")


def _num(x):
    if x is None:
        return None
    return float(x) if math.isfinite(x) else None


@dataclass
class ConditionResult:
    """Numeric outcome of one named condition."""

    id: str
    role: str
    value: float | None = None
    finite: bool | None = None
    passed: bool | None = None
    detail: str = ""
    per_v: dict | None = None

    def to_dict(self) -> dict:
        out = {"id": self.id, "role": self.role, "value": _num(self.value),
               "finite": self.finite, "passed": self.passed,
               "detail": self.detail}
        if self.per_v is not None:
            out["per_v"] = {k: _num(v) for k, v in self.per_v.items()}
        return out


@dataclass
class VerdictReport:
    """Structured outcome of the criteria evaluation."""

    verdict: str
    conditions: list[ConditionResult] = field(default_factory=list)
    reasons: list[str] = field(default_factory=list)
    special: dict = field(default_factory=dict)

    def condition(self, cid: str) -> ConditionResult | None:
        for c in self.conditions:
            if c.id == cid:
                return c
        return None

    def to_dict(self) -> dict:
        order = {cid: i for i, cid in enumerate(CONDITION_ORDER)}
        conds = sorted(self.conditions, key=lambda c: order.get(c.id, 99))
        return {"verdict": self.verdict,
                "conditions": [c.to_dict() for c in conds],
                "reasons": list(self.reasons),
                "special": dict(self.special)}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def _assert_consistent(self):
        # A positive verdict must never coexist with a violated necessity
        # condition under a holding gate.
        if self.verdict != SEMIMARTINGALE:
            return
        gate = self.condition("invar_con")
        if gate is None or gate.passed is not True:
            return
        for c in self.conditions:
            if c.role == ROLE_NECESSARY and c.finite is False:
                raise AssertionError(
                    f"inconsistent report: {c.id} infinite under a true "
                    "necessity gate but verdict is Semimartingale")


def check_drift(model: ModelSpec, kernel: Kernel,
                config: QuadratureConfig | None = None) -> ConditionResult:
    """Sum over v of |B(f(0,v), v)| m(v); the decomposition hypothesis."""
    if not kernel.supports_g_split:
        raise UnsupportedKernelError(
            "drift condition needs a kernel with an (f, f0) pair")
    total = 0.0
    per_v = {}
    for p in model.points:
        val = b_kernel(kernel.f_zero(p.label), p.label, model, config=config)
        per_v[p.label] = abs(val)
        total += p.weight * abs(val)
    return ConditionResult(id="drift4", role=ROLE_GATE, value=total,
                           finite=math.isfinite(total), per_v=per_v)


def check_int1(model: ModelSpec, kernel: Kernel,
               config: QuadratureConfig | None = None) -> ConditionResult:
    """Gaussian part of the sufficiency test: sum of m sigma^2 int fdot^2."""
    if not kernel.has_derivative:
        return ConditionResult(id="int1", role=ROLE_SUFFICIENT,
                               detail="no-derivative")
    total = 0.0
    per_v = {}
    for p in model.points:
        if p.gaussian_var == 0:
            per_v[p.label] = 0.0
            continue
        contrib = p.gaussian_var * kernel.fdot_square_integral(p.label,
                                                               config=config)
        per_v[p.label] = contrib
        total += p.weight * contrib
    return ConditionResult(id="int1", role=ROLE_SUFFICIENT, value=total,
                           finite=math.isfinite(total), per_v=per_v)


def _cf_single(measure: LevyMeasure | None, kernel: Kernel, v,
               config: QuadratureConfig | None, weighted: bool) -> float:
    """Time integral of the (optionally truncation-weighted) jump response."""
    if measure is None:
        return 0.0
    cfg = config or DEFAULT_CONFIG
    if isinstance(kernel, FractionalKernel):
        # Swap the integration order: the time integral against |x fdot| has
        # the closed form C |x|^(1/(1-gamma)), leaving a pure x-moment.
        C = kernel.min_power_constant(v)
        if not math.isfinite(C):
            return INF
        p = 1.0 / (1.0 - kernel.gamma_of(v))
        if weighted:
            moment = measure.abs_moment_trunc_weighted(p, config=cfg)
        else:
            moment = measure.abs_moment(p, config=cfg)
        return C * moment

    if isinstance(measure, StableMeasure) and not weighted:
        C = measure.min_moment_constant()
        if not math.isfinite(C):
            return INF
        return C * kernel.fdot_abs_power_integral(measure.alpha, v, config=cfg)

    splits = list(kernel.fdot_kink_times(1.0, v))
    if isinstance(measure, PointMassMeasure):
        for pos, _ in measure.atoms:
            splits.extend(kernel.fdot_kink_times(1.0 / abs(pos), v))

    def outer(t):
        y = np.abs(kernel.fdot(t, v))
        return measure.min_moment_vec(y, weighted=weighted, config=cfg)

    res = integrate(outer, 0.0, INF, config=cfg, split_points=splits)
    return INF if res.status == DIVERGED else res.value


def check_Cf(model: ModelSpec, kernel: Kernel,
             config: QuadratureConfig | None = None) -> ConditionResult:
    """Jump part of the sufficiency test: m-weighted jump-response integral."""
    if not kernel.has_derivative:
        return ConditionResult(id="Cf", role=ROLE_SUFFICIENT,
                               detail="no-derivative")
    total = 0.0
    per_v = {}
    for p in model.points:
        contrib = _cf_single(p.levy, kernel, p.label, config, weighted=False)
        per_v[p.label] = contrib
        total += p.weight * contrib
    return ConditionResult(id="Cf", role=ROLE_SUFFICIENT, value=total,
                           finite=math.isfinite(total), per_v=per_v)


def check_trunc_case(model: ModelSpec, kernel: Kernel,
                     config: QuadratureConfig | None = None) -> ConditionResult:
    """Truncation-weighted necessity integral, evaluated per mixing point."""
    if not kernel.has_derivative:
        return ConditionResult(id="trunc_case", role=ROLE_NECESSARY,
                               detail="no-derivative")
    per_v = {}
    for p in model.points:
        per_v[p.label] = _cf_single(p.levy, kernel, p.label, config,
                                    weighted=True)
    finite = all(math.isfinite(v) for v in per_v.values())
    total = sum(per_v.values())
    bad = [k for k, v in per_v.items() if not math.isfinite(v)]
    return ConditionResult(id="trunc_case", role=ROLE_NECESSARY, value=total,
                           finite=finite, per_v=per_v,
                           detail=f"infinite at {bad}" if bad else "")


def check_necessity_gate(model: ModelSpec) -> ConditionResult:
    """Infinite-variation gate: every v has sigma^2 > 0 or non-integrable
    small jumps.  Unknown small-jump behavior degrades to unknown."""
    answers = {}
    for p in model.points:
        if p.gaussian_var > 0:
            answers[p.label] = True
            continue
        if p.levy is None:
            answers[p.label] = False
            continue
        answers[p.label] = p.levy.small_jump_variation_infinite()
    if any(a is False for a in answers.values()):
        passed = False
    elif any(a is None for a in answers.values()):
        passed = None
    else:
        passed = True
    detail = ", ".join(f"{k}: {a}" for k, a in answers.items())
    return ConditionResult(id="invar_con", role=ROLE_GATE, passed=passed,
                           detail=detail)


DEFAULT_RATIO_GRID = tuple(np.logspace(-4.0, 4.0, 33))


@dataclass(frozen=True)
class RatioProfile:
    """Tail-to-truncated-second-moment ratio r(u) on a log grid."""

    u: tuple
    r: tuple
    finite: bool
    top_decade_max: float
    global_sup: float
    decreasing_tail: bool

    def to_dict(self):
        return {"u": list(self.u), "r": [_num(x) for x in self.r],
                "finite": self.finite,
                "top_decade_max": _num(self.top_decade_max),
                "global_sup": _num(self.global_sup),
                "decreasing_tail": self.decreasing_tail}


def ratio_profile(measure: LevyMeasure, grid=None, method="auto",
                  config: QuadratureConfig | None = None) -> RatioProfile:
    """Compute r(u) = u * tail-first-moment(u) / truncated-second-moment(u)."""
    grid = tuple(grid) if grid is not None else DEFAULT_RATIO_GRID
    rs = []
    for u in grid:
        num = measure.tail_first_moment(u, method=method, config=config)
        den = measure.truncated_second_moment(u, method=method, config=config)
        if den == 0.0:
            rs.append(INF if num > 0 else 0.0)
        else:
            rs.append(u * num / den)
    top = [r for u, r in zip(grid, rs) if u >= grid[-1] / 10.0]
    finite = all(math.isfinite(r) for r in rs)
    top_max = max(top) if top else INF
    decreasing = len(top) >= 2 and top[-1] <= top[0] * 1.05 + 1e-12
    return RatioProfile(u=grid, r=tuple(rs), finite=finite,
                        top_decade_max=top_max,
                        global_sup=max(rs) if rs else INF,
                        decreasing_tail=decreasing)


def check_ratio(measure: LevyMeasure, mode: str, grid=None, method="auto",
                config: QuadratureConfig | None = None) -> ConditionResult:
    """Ratio conditions: ``u0_limsup`` (large-u end) or ``u00_sup`` (global).

    The limsup is approximated by the maximum over the top decade of the
    grid together with a monotonicity sanity check; it is only ever used to
    strengthen necessity, never sufficiency.
    """
    if mode not in ("u0_limsup", "u00_sup"):
        raise ValueError("mode must be u0_limsup or u00_sup")
    if isinstance(measure, StableMeasure):
        const = measure.ratio_constant()
        ok = math.isfinite(const)
        return ConditionResult(
            id="u0" if mode == "u0_limsup" else "u00", role=ROLE_GATE,
            value=const if ok else None, finite=ok, passed=ok,
            detail="stable ratio is constant in u")
    prof = ratio_profile(measure, grid=grid, method=method, config=config)
    if mode == "u0_limsup":
        sq = measure.second_moment_tail_finite()
        if sq is True:
            return ConditionResult(id="u0", role=ROLE_GATE,
                                   value=prof.top_decade_max, finite=True,
                                   passed=True,
                                   detail="square-integrable tail")
        ok = prof.finite and prof.decreasing_tail
        return ConditionResult(id="u0", role=ROLE_GATE,
                               value=prof.top_decade_max,
                               finite=math.isfinite(prof.top_decade_max),
                               passed=True if ok else None,
                               detail="numeric profile"
                               + ("" if prof.decreasing_tail
                                  else "; tail not settling"))
    ok = prof.finite and math.isfinite(prof.global_sup)
    return ConditionResult(id="u00", role=ROLE_GATE, value=prof.global_sup,
                           finite=math.isfinite(prof.global_sup),
                           passed=ok if ok else None,
                           detail="numeric profile")


def _first_moment_of_martingale(model: ModelSpec, kernel: Kernel,
                                config=None) -> float:
    """Sum of m(v) |f(0,v)| tail-first-moment(1) deciding E|M_t| < inf."""
    total = 0.0
    for p in model.points:
        f0 = kernel.f_zero(p.label)
        if p.levy is None or f0 == 0.0:
            continue
        total += p.weight * abs(f0) * p.levy.tail_first_moment(1.0,
                                                               config=config)
    return total


def _expected_drift_rate(model: ModelSpec, kernel: Kernel, config=None) -> float:
    """E M_1 when it exists: the shift plus the untruncated-jump mean."""
    cfg = config or DEFAULT_CONFIG
    total = 0.0
    for p in model.points:
        f0 = kernel.f_zero(p.label)
        total += p.weight * b_kernel(f0, p.label, model, config=cfg)
        if p.levy is not None and not p.levy.symmetric and f0 != 0.0:
            res = p.levy._integral(
                lambda x, f0=f0: f0 * x - np.clip(f0 * x, -1.0, 1.0),
                splits=(1.0 / abs(f0),), config=cfg)
            total += p.weight * res.value
    return total


def _special_block(model: ModelSpec, kernel: Kernel, verdict: str,
                   config=None) -> dict:
    if verdict != SEMIMARTINGALE or not kernel.supports_g_split:
        return {"applies": False, "is_special": None,
                "first_moment": None, "expected_drift_rate": None}
    fm = _first_moment_of_martingale(model, kernel, config=config)
    is_special = math.isfinite(fm)
    rate = _expected_drift_rate(model, kernel, config=config) if is_special \
        else None
    return {"applies": True, "is_special": is_special,
            "first_moment": _num(fm),
            "expected_drift_rate": _num(rate) if rate is not None else None}


def _all_measures(model: ModelSpec):
    return [p.levy for p in model.points]


def _fractional_rule(model: ModelSpec, kernel: FractionalKernel, conds, reasons,
                     config) -> str:
    """Fractional kernels have an exact characterization: no Gaussian part,
    exponent below one half, and a finite moment of order 1/(1-gamma)."""
    verdict = SEMIMARTINGALE
    bad_sigma = [p.label for p in model.points if p.gaussian_var > 0]
    bad_gamma = [p.label for p in model.points
                 if not 0.0 < kernel.gamma_of(p.label) < 0.5]
    moments = {}
    bad_moment = []
    for p in model.points:
        g = kernel.gamma_of(p.label)
        if p.levy is None or not 0.0 < g < 0.5:
            moments[p.label] = 0.0 if p.levy is None else None
            continue
        mom = p.levy.abs_moment(1.0 / (1.0 - g), config=config)
        moments[p.label] = mom
        if not math.isfinite(mom):
            bad_moment.append(p.label)
    if bad_sigma:
        verdict = NOT_SEMIMARTINGALE
        reasons.append(
            f"fractional rule: gaussian variance is positive at {bad_sigma}, "
            "but the exact fractional characterization requires none")
    if bad_gamma:
        verdict = NOT_SEMIMARTINGALE
        reasons.append(
            f"fractional rule: exponent outside (0, 1/2) at {bad_gamma} "
            "(the process is not even well-defined over a nondegenerate "
            "driver there)")
    if bad_moment:
        verdict = NOT_SEMIMARTINGALE
        reasons.append(
            "fractional rule: moment of order 1/(1-gamma) infinite at "
            f"{bad_moment}")
    # Record the jump-response integral via the order swap: it equals the
    # per-v constant times the recorded moment.
    cf_per_v = {}
    for p in model.points:
        C = kernel.min_power_constant(p.label)
        mom = moments.get(p.label)
        if p.levy is None:
            cf_per_v[p.label] = 0.0
        elif mom is None or not math.isfinite(C):
            cf_per_v[p.label] = INF
        else:
            cf_per_v[p.label] = C * mom
    cf_total = sum(p.weight * cf_per_v[p.label] for p in model.points)
    conds.append(ConditionResult(id="Cf", role=ROLE_SUFFICIENT, value=cf_total,
                                 finite=math.isfinite(cf_total),
                                 per_v=cf_per_v,
                                 detail="time-integral order swap"))
    conds.append(check_int1(model, kernel, config=config))
    conds.append(ConditionResult(id="drift4", role=ROLE_GATE, value=0.0,
                                 finite=True,
                                 detail="diagonal value f(0,v) vanishes"))
    if verdict == SEMIMARTINGALE:
        reasons.append(
            "fractional rule: no gaussian part, every exponent in (0, 1/2) "
            "and every moment of order 1/(1-gamma) finite")
    return verdict


def _stable_ma_rule(model: ModelSpec, kernel: Kernel, conds, reasons,
                    config) -> str | None:
    measures = _all_measures(model)
    alphas = [m.alpha for m in measures]
    if all(a < 1.0 for a in alphas):
        conds.append(check_necessity_gate(model))
        reasons.append(
            "stable driver with index below one: the martingale component "
            "has finite variation, so the semimartingale property reduces "
            "to finite variation of the path itself; the integral criteria "
            "are silent (check realized variation of a simulated path)")
        return INCONCLUSIVE
    if not all(1.0 < a < 2.0 for a in alphas):
        return None
    conds.append(check_drift(model, kernel, config=config))
    gate = ConditionResult(id="invar_con", role=ROLE_GATE, passed=True,
                           detail="stable index above one at every v")
    conds.append(gate)
    if not kernel.has_derivative:
        reasons.append(
            "stable moving average: kernel declares no derivative, and the "
            "infinite-variation gate holds, so absolute continuity fails")
        return NOT_SEMIMARTINGALE
    weighted = {}
    cf_per_v = {}
    for p, m in zip(model.points, measures):
        power_int = kernel.fdot_abs_power_integral(m.alpha, p.label,
                                                   config=config)
        weighted[p.label] = m.c / (2.0 - m.alpha) * power_int
        cf_per_v[p.label] = m.min_moment_constant() * power_int
    total = sum(p.weight * weighted[p.label] for p in model.points)
    cf_total = sum(p.weight * cf_per_v[p.label] for p in model.points)
    ok = math.isfinite(total)
    conds.append(ConditionResult(id="Cf", role=ROLE_SUFFICIENT, value=cf_total,
                                 finite=math.isfinite(cf_total),
                                 per_v=cf_per_v,
                                 detail="stable closed-form response"))
    conds.append(ConditionResult(
        id="fdot_int", role=ROLE_NECESSARY, value=total, finite=ok,
        per_v=weighted,
        detail="weighted |fdot|^alpha integral (exact stable rule)"))
    reasons.append(
        "stable moving average rule: the |fdot|^alpha time integral is "
        + ("finite" if ok else "infinite")
        + " (constant-ratio driver makes the rule exact)")
    return SEMIMARTINGALE if ok else NOT_SEMIMARTINGALE


def _tempered_ma_rule(model: ModelSpec, kernel: Kernel, conds, reasons,
                      config) -> str | None:
    measures = _all_measures(model)
    if not all(1.0 <= m.alpha < 2.0 for m in measures):
        return None
    conds.append(check_drift(model, kernel, config=config))
    gate = ConditionResult(id="invar_con", role=ROLE_GATE, passed=True,
                           detail="tempered stable index at least one")
    conds.append(gate)
    if not kernel.has_derivative:
        reasons.append(
            "tempered stable moving average: kernel declares no derivative "
            "under a true infinite-variation gate")
        return NOT_SEMIMARTINGALE
    per_v = {}
    for p, m in zip(model.points, measures):
        per_v[p.label] = kernel.fdot_min_power_integral(m.alpha, p.label,
                                                        config=config)
    ok = all(math.isfinite(v) for v in per_v.values())
    conds.append(ConditionResult(
        id="fdot_int", role=ROLE_NECESSARY,
        value=sum(per_v.values()), finite=ok, per_v=per_v,
        detail="|fdot|^alpha ^ |fdot|^2 integral (tempered stable rule)"))
    conds.append(check_Cf(model, kernel, config=config))
    reasons.append(
        "tempered stable moving average rule: the |fdot|^alpha ^ |fdot|^2 "
        "time integral is " + ("finite" if ok else "infinite")
        + " (square-integrable tails make the rule exact)")
    return SEMIMARTINGALE if ok else NOT_SEMIMARTINGALE


def _family_rule(model: ModelSpec, kernel: Kernel, conds, reasons,
                 config) -> str | None:
    if isinstance(kernel, FractionalKernel):
        has_levy = any(p.levy is not None for p in model.points)
        has_gauss = model.has_gaussian
        if not has_levy and not has_gauss:
            return None  # degenerate; handled upstream
        return _fractional_rule(model, kernel, conds, reasons, config)
    measures = _all_measures(model)
    if any(m is None for m in measures) or model.has_gaussian:
        return None
    if all(isinstance(m, StableMeasure) for m in measures):
        return _stable_ma_rule(model, kernel, conds, reasons, config)
    if all(isinstance(m, TemperedStableMeasure) for m in measures):
        return _tempered_ma_rule(model, kernel, conds, reasons, config)
    return None


def verdict(model: ModelSpec, kernel: Kernel,
            config: QuadratureConfig | None = None,
            use_family_rules: bool = True) -> VerdictReport:
    """Full decision procedure combining family rules with the general path.

    Any unknown sub-answer degrades the outcome to Inconclusive, never to a
    definite verdict.
    """
    cfg = config or DEFAULT_CONFIG
    conds: list[ConditionResult] = []
    reasons: list[str] = []

    deterministic = all(p.levy is None and p.gaussian_var == 0
                        for p in model.points)
    if deterministic:
        reasons.append("driver is deterministic (no jumps, no gaussian "
                       "part): the path is a drift and trivially a "
                       "semimartingale")
        report = VerdictReport(SEMIMARTINGALE, conds, reasons,
                               _special_block(model, kernel, SEMIMARTINGALE,
                                              cfg))
        return report

    if not kernel.supports_g_split:
        reasons.append("raw phi kernel: the moving-average criteria do not "
                       "apply; no verdict attempted")
        return VerdictReport(INCONCLUSIVE, conds, reasons,
                             _special_block(model, kernel, INCONCLUSIVE, cfg))

    result: str | None = None
    if use_family_rules:
        result = _family_rule(model, kernel, conds, reasons, cfg)

    if result is None:
        result = _general_path(model, kernel, conds, reasons, cfg)

    report = VerdictReport(result, conds, reasons,
                           _special_block(model, kernel, result, cfg))
    report._assert_consistent()
    return report


def _general_path(model: ModelSpec, kernel: Kernel, conds, reasons,
                  cfg) -> str:
    drift = check_drift(model, kernel, config=cfg)
    conds.append(drift)
    if not drift.finite:
        reasons.append("drift condition infinite: the decomposition "
                       "framework does not apply")
        return INCONCLUSIVE

    int1 = check_int1(model, kernel, config=cfg)
    cf = check_Cf(model, kernel, config=cfg)
    conds.extend([int1, cf])

    if kernel.has_derivative and int1.finite and cf.finite:
        reasons.append("sufficiency: declared derivative with finite "
                       "gaussian and jump response integrals")
        return SEMIMARTINGALE

    gate = check_necessity_gate(model)
    conds.append(gate)
    if gate.passed is None:
        reasons.append("necessity gate unknown (custom measure without "
                       "declared small-jump exponent)")
        return INCONCLUSIVE
    if gate.passed is False:
        reasons.append("sufficiency fails but the infinite-variation gate "
                       "does not hold: the necessity theorems are silent")
        return INCONCLUSIVE

    if not kernel.has_derivative:
        reasons.append("necessity: kernel declares no derivative (treated "
                       "as not absolutely continuous) under a true "
                       "infinite-variation gate")
        return NOT_SEMIMARTINGALE
    if int1.finite is False:
        reasons.append("necessity: gaussian derivative integral infinite "
                       "under a true infinite-variation gate")
        return NOT_SEMIMARTINGALE

    trunc = check_trunc_case(model, kernel, config=cfg)
    conds.append(trunc)
    if trunc.finite is False:
        reasons.append("necessity: truncation-weighted response integral "
                       "infinite under a true infinite-variation gate")
        return NOT_SEMIMARTINGALE

    # Sufficiency failed through Cf; a bounded tail ratio upgrades the
    # sufficiency test to an exact converse.
    u00s = [check_ratio(p.levy, "u00_sup", config=cfg)
            for p in model.points if p.levy is not None]
    u00_ok = all(c.passed is True for c in u00s)
    u00_val = max((c.value for c in u00s if c.value is not None), default=None)
    conds.append(ConditionResult(id="u00", role=ROLE_GATE, value=u00_val,
                                 finite=all(c.finite for c in u00s),
                                 passed=u00_ok if u00_ok else None,
                                 detail="max over v of the ratio sup"))
    if u00_ok and cf.finite is False:
        reasons.append("necessity: jump response integral infinite and the "
                       "tail ratio is uniformly bounded (exact converse "
                       "regime)")
        return NOT_SEMIMARTINGALE

    u0s = [check_ratio(p.levy, "u0_limsup", config=cfg)
           for p in model.points if p.levy is not None]
    u0_ok = all(c.passed is True for c in u0s)
    u0_val = max((c.value for c in u0s if c.value is not None), default=None)
    conds.append(ConditionResult(id="u0", role=ROLE_GATE, value=u0_val,
                                 finite=all(c.finite for c in u0s),
                                 passed=u0_ok if u0_ok else None,
                                 detail="max over v of the top-decade ratio"))
    if u0_ok and cf.finite is False:
        conds.append(ConditionResult(
            id="fdot_int", role=ROLE_NECESSARY, value=cf.value,
            finite=False, per_v=cf.per_v,
            detail="per-v jump response under the large-u ratio condition"))
        reasons.append("necessity: jump response integral infinite, the "
                       "large-u ratio condition holds and the mixing space "
                       "is finite (exact converse regime)")
        return NOT_SEMIMARTINGALE

    reasons.append("sufficiency fails but no necessity clause binds: the "
                   "criteria leave a gap here")
    return INCONCLUSIVE
