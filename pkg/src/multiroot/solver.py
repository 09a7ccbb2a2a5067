"""Iteration driver, traces and convergence diagnostics (COC, ACOC, error ratios)."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .methods import MethodSpec, check_prerequisites, step
from .numerics import DomainError, PrecisionConfig, RealField, scalar_from_decimal, scalar_to_decimal
from .problems import Problem

STEP_TOL = "step_tol"
RESIDUAL_TOL = "residual_tol"
MAX_ITER = "max_iter"
STEP_FAILURE = "step_failure"


class ExactHit(ArithmeticError):
    """An error or step difference is exactly zero (or below the precision floor),
    so an order estimate is undefined: the iteration landed on the root."""


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 50
    step_tolerance: object = None
    residual_tolerance: object = None
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        floor = self.precision.tiny(10)
        for name in ("step_tolerance", "residual_tolerance"):
            value = getattr(self, name)
            value = floor if value is None else self.precision.mpf(value)
            if not value > 0:
                raise ValueError(f"{name} must be positive")
            object.__setattr__(self, name, value)


@dataclass
class Trace:
    iterates: list
    intermediates: list
    residuals: list
    errors: Optional[list]
    termination: str
    precision: PrecisionConfig
    root: object = None
    failure: Optional[str] = None

    def __len__(self):
        return len(self.iterates)

    def signed_errors(self, alpha=None) -> list:
        alpha = self.root if alpha is None else alpha
        if alpha is None:
            raise ValueError("no root given and the trace has no known root")
        return [x - alpha for x in self.iterates]


@dataclass(frozen=True)
class ErrorConstant:
    value: object

    def __float__(self):
        return float(self.value)


def _as_scalar(x, cfg: PrecisionConfig):
    if isinstance(x, str):
        return scalar_from_decimal(x, cfg)
    if isinstance(x, (int, Fraction)):
        return cfg.mpf(Fraction(x))
    return cfg.mpf(x)


def solve(p: Problem, spec: MethodSpec, x0, cfg: SolverConfig | None = None,
          fixed_steps: int | None = None) -> Trace:
    """Iterate ``spec`` from ``x0``.

    With ``fixed_steps`` the tolerances are ignored and exactly that many steps
    are attempted (a step failure still truncates the run).
    """
    cfg = cfg or SolverConfig()
    check_prerequisites(p, spec)
    prec = cfg.precision
    F = RealField(prec)
    x = _as_scalar(x0, prec)
    alpha = p.known_root

    def residual(v):
        return abs(p.f(v))

    iterates, intermediates, residuals = [x], [None], []
    errors = [abs(x - alpha)] if alpha is not None else None
    try:
        residuals.append(residual(x))
    except DomainError:
        residuals.append(None)
        return Trace(iterates, intermediates, residuals, errors, STEP_FAILURE, prec, alpha,
                     failure="domain_error")

    if fixed_steps is None and residuals[0] < cfg.residual_tolerance:
        return Trace(iterates, intermediates, residuals, errors, RESIDUAL_TOL, prec, alpha)

    limit = cfg.max_iterations if fixed_steps is None else fixed_steps
    termination, failure = MAX_ITER, None
    for _ in range(limit):
        out = step(p, x, spec, field=F)
        if out.ok:
            try:
                r = residual(out.next)
            except DomainError:
                out = None
        if out is None or not out.ok:
            termination = STEP_FAILURE
            failure = "domain_error" if out is None else out.status
            break
        x_prev, x = x, out.next
        iterates.append(x)
        intermediates.append(out.intermediate)
        residuals.append(r)
        if errors is not None:
            errors.append(abs(x - alpha))
        if fixed_steps is not None:
            continue
        if abs(x - x_prev) < cfg.step_tolerance:
            termination = STEP_TOL
            break
        if r < cfg.residual_tolerance:
            termination = RESIDUAL_TOL
            break
    return Trace(iterates, intermediates, residuals, errors, termination, prec, alpha, failure)


def _log_ratio_order(ctx, a, b, c):
    """ln|c/b| / ln|b/a| for three consecutive magnitudes a, b, c."""
    den = ctx.log(abs(b / a))
    if den == 0:
        raise ValueError("consecutive values are equal; order undefined")
    return ctx.log(abs(c / b)) / den


def coc(t: Trace, alpha=None):
    """Computational order of convergence from the latest three errors above the precision floor."""
    if len(t) < 3:
        raise ValueError("COC needs at least 3 iterates")
    e = t.signed_errors(alpha)
    floor = t.precision.tiny(10)
    ctx = t.precision.ctx
    for n in range(len(e) - 2, 0, -1):
        window = e[n - 1:n + 2]
        if all(abs(v) > floor for v in window):
            return _log_ratio_order(ctx, *window)
    if any(abs(v) <= floor for v in e):
        raise ExactHit("error reached zero before a usable COC window")
    raise ValueError("no usable COC window")


def acoc(t: Trace):
    """Approximated COC from the latest four iterates with step sizes above the precision floor."""
    if len(t) < 4:
        raise ValueError("ACOC needs at least 4 iterates")
    x = t.iterates
    d = [x[k] - x[k - 1] for k in range(1, len(x))]
    floor = t.precision.tiny(10)
    ctx = t.precision.ctx
    for n in range(len(d) - 2, 0, -1):
        window = d[n - 1:n + 2]
        if all(abs(v) > floor for v in window):
            return _log_ratio_order(ctx, *window)
    if any(abs(v) <= floor for v in d):
        raise ExactHit("step size reached zero before a usable ACOC window")
    raise ValueError("no usable ACOC window")


def error_constant(c1, c2, m: int) -> ErrorConstant:
    """Leading coefficient of e_{n+1} = C e_n**3 for the modified Newton-Secant step (c_0 = 1)."""
    return ErrorConstant((m * c1 * c1 - 2 * (m - 1) * c2) / (2 * m * m))


def empirical_error_ratio(t: Trace, alpha=None, order: int = 3) -> list:
    """Signed ratios e_{n+1} / e_n**order over pairs away from both 1e-2 and the precision floor.

    A pair is skipped when e_n is outside (10**(-digits/order), 1e-2), or when
    it is saturated: e_{n+1} is at the precision floor, or the step from x_n
    was noise-driven.  Evaluating f near the root loses absolute accuracy of
    about 10**-digits (terms of order one cancel), so x_{n+1} carries an error
    of roughly |e_n| * 10**-digits / |f(x_n)|; that must stay below a
    thousandth of |e_{n+1}|.
    """
    e = t.signed_errors(alpha)
    res = list(t.residuals) + [None] * (len(e) - len(t.residuals))
    prec = t.precision
    ctx = prec.ctx
    lower = ctx.mpf(10) ** (-ctx.mpf(prec.digits) / order)
    upper = ctx.mpf(10) ** -2
    floor = prec.tiny(10)
    eps = ctx.mpf(10) ** -prec.digits
    ratios, saturated = [], False
    for n, (en, enext) in enumerate(zip(e, e[1:])):
        if not lower < abs(en) < upper:
            continue
        r = res[n]
        noisy = r is not None and (r == 0 or abs(en) * eps > r * abs(enext) / 1000)
        if abs(enext) <= floor or noisy:
            saturated = True
            continue
        ratios.append(enext / en ** order)
    if not ratios:
        if saturated:
            raise ExactHit("next error vanished; ratio undefined")
        raise ValueError("no usable error pairs")
    return ratios


def trace_to_csv(t: Trace) -> str:
    """n, x_n, |f(x_n)|, |x_n - alpha| at full working precision."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "x_n", "abs_f", "abs_err"])
    cfg = t.precision
    for n, x in enumerate(t.iterates):
        r = t.residuals[n] if n < len(t.residuals) else None
        err = t.errors[n] if t.errors is not None else None
        w.writerow([
            n,
            scalar_to_decimal(x, cfg),
            "" if r is None else scalar_to_decimal(r, cfg),
            "" if err is None else scalar_to_decimal(err, cfg),
        ])
    return buf.getvalue()
