"""One-step iteration kernels for multiple roots of known multiplicity m.

Every kernel is written once against a field object (see numerics) and runs
unchanged on high-precision reals or on numpy complex arrays.  The
``step_*`` wrappers are the real-valued entry points: they guard divisions
and report failures through ``StepOutcome.status`` instead of raising.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .numerics import (
    COMPLEX,
    DENOMINATOR_UNDERFLOW,
    DERIVATIVE_UNDERFLOW,
    DOMAIN_ERROR,
    DomainError,
    PrecisionConfig,
    RealField,
    StepFailure,
)
from .problems import Problem

OK = "ok"


class MethodKind(str, enum.Enum):
    NEWTON_SECANT = "newton_secant"
    MODIFIED_NEWTON_SECANT = "mns"
    SCHRODER = "schroder"
    OSADA = "osada"
    DONG = "dong"
    CHUN = "chun"


ALIASES = {
    "ns": MethodKind.NEWTON_SECANT,
    "newton-secant": MethodKind.NEWTON_SECANT,
    "modified_newton_secant": MethodKind.MODIFIED_NEWTON_SECANT,
    "schroeder": MethodKind.SCHRODER,
}

NEEDS_SECOND_DERIVATIVE = frozenset({MethodKind.OSADA, MethodKind.CHUN})

# the four methods compared in the benchmark table and basin figures
COMPARED = (MethodKind.MODIFIED_NEWTON_SECANT, MethodKind.OSADA, MethodKind.DONG, MethodKind.CHUN)


def method_kind(name) -> MethodKind:
    if isinstance(name, MethodKind):
        return name
    key = str(name).strip().lower()
    if key in ALIASES:
        return ALIASES[key]
    try:
        return MethodKind(key)
    except ValueError:
        names = ", ".join(k.value for k in MethodKind)
        raise ValueError(f"unknown method {name!r}; choose from {names}") from None


@dataclass(frozen=True)
class MethodSpec:
    kind: MethodKind = MethodKind.MODIFIED_NEWTON_SECANT
    gamma: Fraction = Fraction(-1)
    dong_sign: str = "minus"
    # where Dong's second substep evaluates f': "x" (Dong 1987) or "y"
    dong_derivative_at: str = "x"

    def __post_init__(self):
        object.__setattr__(self, "kind", method_kind(self.kind))
        try:
            object.__setattr__(self, "gamma", Fraction(self.gamma))
        except (ValueError, TypeError, OverflowError):
            raise ValueError(f"gamma must be a finite number, got {self.gamma!r}") from None
        if self.dong_sign not in ("minus", "plus"):
            raise ValueError("dong_sign must be 'minus' or 'plus'")
        if self.dong_derivative_at not in ("x", "y"):
            raise ValueError("dong_derivative_at must be 'x' or 'y'")

    @property
    def needs_second_derivative(self) -> bool:
        return self.kind in NEEDS_SECOND_DERIVATIVE


@dataclass(frozen=True)
class StepOutcome:
    next: object
    intermediate: object = None
    status: str = OK

    @property
    def ok(self) -> bool:
        return self.status == OK


def theta_exact(m: int) -> Fraction:
    """((m - 1)/m)**(m - 1) as an exact rational; 1 for m = 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return Fraction((m - 1) ** (m - 1), m ** (m - 1))


def theta(m: int, cfg: PrecisionConfig | None = None):
    return (cfg or PrecisionConfig()).mpf(theta_exact(m))


# -- kernels: (problem, x, field, spec) -> (next, intermediate) ---------------

def _newton_secant(p, x, F, spec):
    fx = p.f(x)
    u = F.div(fx, p.df(x), DERIVATIVE_UNDERFLOW)
    y = x - u
    fy = p.f(y)
    return x - F.div(fx, fx - fy) * u, y


def _mns(p, x, F, spec):
    th = F.const(theta_exact(p.multiplicity))
    fx = p.f(x)
    u = F.div(fx, p.df(x), DERIVATIVE_UNDERFLOW)
    y = x - u
    fy = p.f(y)
    t = th * fx
    return x - F.div(t, t - fy) * u, y


def _schroder(p, x, F, spec):
    u = F.div(p.f(x), p.df(x), DERIVATIVE_UNDERFLOW)
    return x - p.multiplicity * u, None


def _osada(p, x, F, spec):
    m = p.multiplicity
    fx, d1 = p.f(x), p.df(x)
    out = x - F.const(Fraction(m * (m + 1), 2)) * F.div(fx, d1, DERIVATIVE_UNDERFLOW)
    if m > 1:
        out = out + F.const(Fraction((m - 1) ** 2, 2)) * F.div(d1, p.d2f(x), DERIVATIVE_UNDERFLOW)
    return out, None


def _dong(p, x, F, spec):
    m = p.multiplicity
    if m < 2:
        raise ValueError("Dong's method needs multiplicity >= 2")
    s = F.sqrt(m)
    d1 = p.df(x)
    u = F.div(p.f(x), d1, DERIVATIVE_UNDERFLOW)
    y = x - s * u if spec.dong_sign == "minus" else x + s * u
    fy = p.f(y)
    if spec.dong_derivative_at == "y":
        d1 = p.df(y)
    coef = m * (1 - 1 / s) ** (1 - m)
    return y - coef * F.div(fy, d1, DERIVATIVE_UNDERFLOW), y


def _chun(p, x, F, spec):
    m, g = p.multiplicity, spec.gamma
    a = Fraction(m * ((2 * g - 1) * m + 3 - 2 * g), 2)
    b = g * (m - 1) ** 2 / 2
    c = (1 - g) * m * m / 2
    fx, d1 = p.f(x), p.df(x)
    u = F.div(fx, d1, DERIVATIVE_UNDERFLOW)
    out = x - F.const(a) * u
    if b or c:
        d2 = p.d2f(x)
        if b:
            out = out + F.const(b) * F.div(d1, d2, DERIVATIVE_UNDERFLOW)
        if c:
            # f^2 f'' / f'^3 = u^2 * f''/f'
            out = out - F.const(c) * (u * u) * F.div(d2, d1, DERIVATIVE_UNDERFLOW)
    return out, None


KERNELS: dict[MethodKind, Callable] = {
    MethodKind.NEWTON_SECANT: _newton_secant,
    MethodKind.MODIFIED_NEWTON_SECANT: _mns,
    MethodKind.SCHRODER: _schroder,
    MethodKind.OSADA: _osada,
    MethodKind.DONG: _dong,
    MethodKind.CHUN: _chun,
}


def check_prerequisites(p: Problem, spec: MethodSpec) -> None:
    if spec.needs_second_derivative and p.d2f is None:
        raise ValueError(f"{spec.kind.value} requires f'' but problem {p.name} has none")
    if spec.kind is MethodKind.DONG and p.multiplicity < 2:
        raise ValueError("Dong's method needs multiplicity >= 2")


def step(p: Problem, x, spec: MethodSpec, cfg: PrecisionConfig | None = None,
         field: Optional[RealField] = None) -> StepOutcome:
    """Apply one step of ``spec`` at the real point ``x``."""
    check_prerequisites(p, spec)
    F = field or RealField(cfg or PrecisionConfig())
    try:
        nxt, mid = KERNELS[spec.kind](p, x, F, spec)
    except StepFailure as exc:
        return StepOutcome(None, None, exc.status)
    except DomainError:
        return StepOutcome(None, None, DOMAIN_ERROR)
    except ZeroDivisionError:
        return StepOutcome(None, None, DENOMINATOR_UNDERFLOW)
    if not F.isfinite(nxt):
        return StepOutcome(None, None, DENOMINATOR_UNDERFLOW)
    return StepOutcome(nxt, mid, OK)


def step_newton_secant(p, x, cfg=None):
    return step(p, x, MethodSpec(MethodKind.NEWTON_SECANT), cfg)


def step_mns(p, x, cfg=None):
    return step(p, x, MethodSpec(MethodKind.MODIFIED_NEWTON_SECANT), cfg)


def step_schroder(p, x, cfg=None):
    return step(p, x, MethodSpec(MethodKind.SCHRODER), cfg)


def step_osada(p, x, cfg=None):
    return step(p, x, MethodSpec(MethodKind.OSADA), cfg)


def step_dong(p, x, spec: MethodSpec | None = None, cfg=None):
    spec = spec or MethodSpec(MethodKind.DONG)
    return step(p, x, spec, cfg)


def step_chun(p, x, spec: MethodSpec | None = None, cfg=None):
    spec = spec or MethodSpec(MethodKind.CHUN)
    return step(p, x, spec, cfg)


def complex_map(p: Problem, spec: MethodSpec) -> Callable:
    """The full iteration map z -> G(z) in binary64, vectorised over numpy arrays."""
    check_prerequisites(p, spec)
    kernel = KERNELS[spec.kind]

    def G(z):
        return kernel(p, z, COMPLEX, spec)[0]

    return G
