"""Number fields the iteration kernels run over.

Real work happens in an mpmath context with a per-run decimal precision;
basin rendering uses plain binary64 complex numbers (numpy arrays).  Both
are wrapped in a small "field" object that supplies constants, square roots
of constants and division, so a kernel can be written once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

MIN_DIGITS = 16
DEFAULT_DIGITS = 100

# step failure kinds, shared with methods.StepOutcome.status
DERIVATIVE_UNDERFLOW = "derivative_underflow"
DENOMINATOR_UNDERFLOW = "denominator_underflow"
DOMAIN_ERROR = "domain_error"


class DomainError(ValueError):
    """A function was evaluated outside its real domain."""


class StepFailure(ArithmeticError):
    """Raised inside a kernel when a guarded division would blow up."""

    def __init__(self, status: str, detail: str = ""):
        super().__init__(detail or status)
        self.status = status


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision for one run, in significant decimal digits."""

    significant_digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        if not isinstance(self.significant_digits, int) or isinstance(self.significant_digits, bool):
            raise TypeError("significant_digits must be an int")
        if self.significant_digits < MIN_DIGITS:
            raise ValueError(
                f"need at least {MIN_DIGITS} significant digits, got {self.significant_digits}"
            )
        # private context, never mutated after this point; no global mpmath state is touched
        ctx = mpmath.MPContext()
        ctx.dps = self.significant_digits
        object.__setattr__(self, "_ctx", ctx)

    @property
    def ctx(self) -> mpmath.MPContext:
        return self._ctx

    @property
    def digits(self) -> int:
        return self.significant_digits

    def mpf(self, value) -> mpmath.mpf:
        if isinstance(value, Fraction):
            return self.ctx.mpf(value.numerator) / value.denominator
        return self.ctx.mpf(value)

    def tiny(self, slack: int = 10):
        """10**-(digits - slack): the precision floor used by stopping rules."""
        return self.ctx.mpf(10) ** (slack - self.significant_digits)


def with_precision(digits: int) -> PrecisionConfig:
    return PrecisionConfig(digits)


def scalar_from_decimal(s: str, cfg: PrecisionConfig):
    """Parse a signed decimal string into a Scalar at ``cfg`` precision."""
    if not isinstance(s, str):
        raise TypeError("expected a decimal string")
    text = s.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a decimal number: {s!r}") from None
    if "/" in text:
        raise ValueError(f"not a decimal number: {s!r}")
    # exact rational first, then one rounding into the context
    return cfg.mpf(value)


def scalar_to_decimal(x, cfg: PrecisionConfig) -> str:
    return cfg.ctx.nstr(x, cfg.significant_digits, strip_zeros=False)


class RealField:
    """Configurable-precision real arithmetic with guarded division."""

    complex_valued = False

    def __init__(self, cfg: PrecisionConfig, guard_slack: int = 5):
        self.cfg = cfg
        self.ctx = cfg.ctx
        self._eps = cfg.tiny(guard_slack)

    def const(self, q):
        return self.cfg.mpf(Fraction(q))

    def sqrt(self, q):
        return self.ctx.sqrt(self.const(q))

    def div(self, num, den, status=DENOMINATOR_UNDERFLOW):
        # relative guard: |den| must not be negligible next to |num|
        if den == 0 or abs(den) < self._eps * abs(num):
            raise StepFailure(status)
        out = num / den
        if not self.ctx.isfinite(out):
            raise StepFailure(status)
        return out

    def isfinite(self, x) -> bool:
        return bool(self.ctx.isfinite(x))


class ComplexField:
    """binary64 complex arithmetic; works on Python complex and numpy arrays.

    Division is unguarded: zero denominators yield inf/nan, which the basin
    renderer treats as non-convergence.
    """

    complex_valued = True

    def const(self, q):
        return float(Fraction(q))

    def sqrt(self, q):
        return math.sqrt(float(Fraction(q)))

    def div(self, num, den, status=DENOMINATOR_UNDERFLOW):
        return num / den

    def isfinite(self, x) -> bool:
        return bool(np.all(np.isfinite(x)))


COMPLEX = ComplexField()


def ipow(x, n: int):
    """x**n for integer n >= 0 by binary powering (same op sequence for any field)."""
    if n < 0:
        raise ValueError("negative exponent")
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    if result is None:
        return x * 0 + 1
    return result
