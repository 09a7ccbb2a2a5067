"""Target functions with multiple roots.

Four transcendental benchmarks (f1-f4) with hand-written f, f', f''; three
complex polynomial powers for the basin experiment (p1-p3); a small real
polynomial with a double root whose asymptotic error constant is known in
closed form (poly_m2_demo).  Polynomial problems carry their coefficients
so they can be Taylor-shifted exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .numerics import DEFAULT_DIGITS, DomainError, PrecisionConfig, ipow


@dataclass(frozen=True, kw_only=True)
class Problem:
    name: str
    f: Callable
    df: Callable
    d2f: Optional[Callable] = None
    multiplicity: int = 1
    known_root: object = None
    known_roots_complex: tuple = ()
    default_x0: object = None
    formula: str = ""
    # ascending power coefficients, only for polynomial problems
    coefficients: Optional[tuple] = None

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    @property
    def is_polynomial(self) -> bool:
        return self.coefficients is not None


@dataclass(frozen=True, kw_only=True)
class PolynomialProblem(Problem):
    """q(z)**m where q has simple roots; f, f', f'' accept real or complex input."""

    inner_coefficients: tuple = ()
    outer_power: int = 1


def horner(coeffs: Sequence, x):
    """q(x), q'(x), q''(x) for ascending ``coeffs``."""
    it = reversed(coeffs)
    p = next(it) + 0 * x
    dp = 0 * x
    ddp = 0 * x
    for c in it:
        ddp = ddp * x + dp
        dp = dp * x + p
        p = p * x + c
    return p, dp, 2 * ddp


def poly_mul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def poly_pow(a: Sequence, n: int) -> list:
    out = [1]
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def _power_closures(g, dg, d2g, m: int):
    """f = g**m and its first two derivatives by the chain rule."""

    def f(x):
        return ipow(g(x), m)

    def df(x):
        return m * ipow(g(x), m - 1) * dg(x)

    def d2f(x):
        gx, g1 = g(x), dg(x)
        if m == 1:
            return d2g(x)
        return m * ipow(gx, m - 2) * ((m - 1) * g1 * g1 + gx * d2g(x))

    return f, df, d2f


def _polynomial_power_closures(inner: Sequence, m: int):
    def f(x):
        return ipow(horner(inner, x)[0], m)

    def df(x):
        q, dq, _ = horner(inner, x)
        return m * ipow(q, m - 1) * dq

    def d2f(x):
        q, dq, ddq = horner(inner, x)
        if m == 1:
            return ddq
        return m * ipow(q, m - 2) * ((m - 1) * dq * dq + q * ddq)

    return f, df, d2f


def polynomial_power(
    name: str,
    inner: Sequence,
    m: int,
    *,
    roots: Sequence = (),
    known_root=None,
    default_x0=None,
    formula: str = "",
) -> PolynomialProblem:
    inner = tuple(inner)
    f, df, d2f = _polynomial_power_closures(inner, m)
    return PolynomialProblem(
        name=name,
        f=f,
        df=df,
        d2f=d2f,
        multiplicity=m,
        known_root=known_root,
        known_roots_complex=tuple(roots),
        default_x0=default_x0,
        formula=formula,
        coefficients=tuple(poly_pow(inner, m)),
        inner_coefficients=inner,
        outer_power=m,
    )


def polynomial(name: str, coeffs: Sequence, m: int, *, known_root=None, default_x0=None,
               formula: str = "") -> Problem:
    """A plain polynomial (ascending coefficients) with a root of multiplicity ``m``."""
    coeffs = tuple(coeffs)

    def f(x):
        return horner(coeffs, x)[0]

    def df(x):
        return horner(coeffs, x)[1]

    def d2f(x):
        return horner(coeffs, x)[2]

    return Problem(name=name, f=f, df=df, d2f=d2f, multiplicity=m, known_root=known_root,
                   default_x0=default_x0, formula=formula, coefficients=coeffs)


def monomial(alpha, m: int, cfg: PrecisionConfig | None = None) -> PolynomialProblem:
    """(x - alpha)**m."""
    if cfg is not None and not isinstance(alpha, (int, Fraction)):
        alpha = cfg.mpf(alpha)
    return polynomial_power(f"monomial_m{m}", (-alpha, 1), m, known_root=alpha,
                            formula=f"(x - {alpha})^{m}")


# -- transcendental benchmarks ------------------------------------------------

def _f1(cfg, m=5):
    ctx = cfg.ctx

    def g(x):
        return ctx.sin(x) ** 2 + x

    def dg(x):
        return ctx.sin(2 * x) + 1

    def d2g(x):
        return 2 * ctx.cos(2 * x)

    f, df, d2f = _power_closures(g, dg, d2g, m)
    return Problem(name="f1", f=f, df=df, d2f=d2f, multiplicity=m, known_root=ctx.mpf(0),
                   default_x0=cfg.mpf(Fraction("0.1")), formula="(sin^2 x + x)^5")


def _positive(ctx, x):
    if not x > 0:
        raise DomainError(f"x must be positive, got {ctx.nstr(x, 8)}")


def _f2(cfg, m=3):
    ctx = cfg.ctx

    def g(x):
        _positive(ctx, x)
        return ctx.log(x) + ctx.sqrt(x) - 5

    def dg(x):
        _positive(ctx, x)
        return 1 / x + 1 / (2 * ctx.sqrt(x))

    def d2g(x):
        _positive(ctx, x)
        return -1 / x**2 - 1 / (4 * x * ctx.sqrt(x))

    root = ctx.findroot(g, ctx.mpf("8.3094326942315717953469556827"))
    f, df, d2f = _power_closures(g, dg, d2g, m)
    return Problem(name="f2", f=f, df=df, d2f=d2f, multiplicity=m, known_root=root,
                   default_x0=ctx.mpf(8), formula="(ln x + sqrt(x) - 5)^3")


def _expm1(ctx, h):
    """exp(h) - 1 without cancellation.

    ctx.expm1 raises the context precision internally, which is not safe when
    one context is shared between threads, so small arguments use the series.
    """
    if abs(h) > 0.5:
        return ctx.exp(h) - 1
    term = total = h
    k = 1
    while abs(term) > ctx.eps * abs(total):
        k += 1
        term = term * h / k
        total += term
    return total


def _f3(cfg, m=6):
    ctx = cfg.ctx

    # x^2 + 7x - 30 = (x - 3)(x + 10) keeps digits near the root
    def h(x):
        return (x - 3) * (x + 10)

    def g(x):
        return _expm1(ctx, h(x))

    def dg(x):
        return (2 * x + 7) * ctx.exp(h(x))

    def d2g(x):
        return (2 + (2 * x + 7) ** 2) * ctx.exp(h(x))

    f, df, d2f = _power_closures(g, dg, d2g, m)
    return Problem(name="f3", f=f, df=df, d2f=d2f, multiplicity=m, known_root=ctx.mpf(3),
                   default_x0=cfg.mpf(Fraction("3.1")), formula="(exp(x^2 + 7x - 30) - 1)^6")


def _f4(cfg, m=7):
    ctx = cfg.ctx

    def g(x):
        _positive(ctx, x)
        return ctx.sqrt(x) - 1 / x - 3

    def dg(x):
        _positive(ctx, x)
        return 1 / (2 * ctx.sqrt(x)) + 1 / x**2

    def d2g(x):
        _positive(ctx, x)
        return -1 / (4 * x * ctx.sqrt(x)) - 2 / x**3

    root = ctx.findroot(g, ctx.mpf("9.6335955628326951924063127092"))
    f, df, d2f = _power_closures(g, dg, d2g, m)
    return Problem(name="f4", f=f, df=df, d2f=d2f, multiplicity=m, known_root=root,
                   default_x0=ctx.mpf(9), formula="(sqrt(x) - 1/x - 3)^7")


# -- complex polynomial problems ------------------------------------------------

# Tabulated root approximations, polished to full precision at build time.
# Order here fixes the root index (and so the palette colour).
_BASIN_TABLE = {
    "p1": ((-1, 0, 0, 1), 10, "(z^3 - 1)^10", (1, complex(-0.5, 0.866025), complex(-0.5, -0.866025))),
    "p2": ((1, 0, -1, 0, 0, 1), 15, "(z^5 - z^2 + 1)^15",
           (-0.808731, complex(-0.464912, 1.07147), complex(-0.464912, -1.07147),
            complex(0.869278, 0.388269), complex(0.869278, -0.388269))),
    "p3": ((0, -1, 0, 0, 2), 8, "(2z^4 - z)^8",
           (0, complex(-0.39685, 0.687365), complex(-0.39685, -0.687365), 0.793701)),
}


def _basin_problem(name, cfg):
    inner, m, formula, approx = _BASIN_TABLE[name]
    ctx = cfg.ctx

    def q(z):
        return horner(inner, z)[0]

    roots = []
    for z0 in approx:
        r = ctx.findroot(q, ctx.mpc(z0))
        roots.append(complex(r))
    return polynomial_power(name, inner, m, roots=roots, formula=formula)


def _poly_m2_demo(cfg):
    # (x - 1)^2 (x + 2) = x^3 - 3x + 2
    return polynomial("poly_m2_demo", (2, -3, 0, 1), 2, known_root=cfg.ctx.mpf(1),
                      default_x0=cfg.mpf(Fraction("1.01")), formula="(x - 1)^2 (x + 2)")


_BUILDERS = {
    "f1": _f1,
    "f2": _f2,
    "f3": _f3,
    "f4": _f4,
    "p1": lambda cfg: _basin_problem("p1", cfg),
    "p2": lambda cfg: _basin_problem("p2", cfg),
    "p3": lambda cfg: _basin_problem("p3", cfg),
    "poly_m2_demo": _poly_m2_demo,
}

BUILTIN_NAMES = tuple(_BUILDERS)
BENCHMARK_NAMES = ("f1", "f2", "f3", "f4")
BASIN_NAMES = ("p1", "p2", "p3")


def builtin(name: str, cfg: PrecisionConfig | None = None) -> Problem:
    """Look up a registered problem, building its closures at ``cfg`` precision."""
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    return build(cfg or PrecisionConfig(DEFAULT_DIGITS))


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction))


def taylor_shift(coeffs: Sequence, alpha) -> list:
    """Coefficients b_k of p(alpha + e) = sum b_k e^k by repeated synthetic division."""
    work = list(reversed(coeffs))  # descending
    shifted = []
    while work:
        acc = work[0]
        quotient = [acc]
        for c in work[1:]:
            acc = acc * alpha + c
            quotient.append(acc)
        shifted.append(quotient.pop())
        work = quotient
    return shifted


def poly_taylor_at_root(p, alpha, order: int, *, multiplicity: int | None = None,
                        cfg: PrecisionConfig | None = None) -> list:
    """Normalised coefficients (c_0 = 1, c_1, ...) of f(alpha + e) / e**m.

    ``p`` is a polynomial Problem or a sequence of ascending coefficients (then
    ``multiplicity`` is required).  The expansion runs through e**order, so the
    result has order - m + 1 entries.  Exact when alpha and the coefficients are
    ints/Fractions.
    """
    if isinstance(p, Problem):
        if p.coefficients is None:
            raise ValueError(f"{p.name} is not a polynomial problem")
        coeffs = p.coefficients
        m = multiplicity or p.multiplicity
    else:
        coeffs = tuple(p)
        if multiplicity is None:
            raise ValueError("multiplicity is required for a raw coefficient list")
        m = multiplicity
    if order < m + 2:
        raise ValueError(f"order must be at least m + 2 = {m + 2}")

    exact = _is_exact(alpha) and all(_is_exact(c) for c in coeffs)
    if exact:
        alpha = Fraction(alpha)
        coeffs = [Fraction(c) for c in coeffs]
    else:
        cfg = cfg or PrecisionConfig(DEFAULT_DIGITS)
        alpha = cfg.mpf(alpha) if _is_exact(alpha) else cfg.ctx.convert(alpha)
        coeffs = [cfg.mpf(c) if _is_exact(c) else cfg.ctx.convert(c) for c in coeffs]

    b = taylor_shift(coeffs, alpha)
    b += [0] * (order + 1 - len(b))

    if exact:
        vanished = all(bk == 0 for bk in b[:m])
        leading_ok = b[m] != 0
    else:
        scale = max(abs(c) for c in coeffs) * max(1, abs(alpha)) ** (len(coeffs) - 1)
        tol = cfg.tiny(10) * scale
        vanished = all(abs(bk) <= tol for bk in b[:m])
        leading_ok = abs(b[m]) > tol
    if not vanished:
        raise ValueError("alpha is not a root of the stated multiplicity (low-order terms do not vanish)")
    if not leading_ok:
        raise ValueError("alpha has multiplicity higher than stated")
    lead = b[m]
    return [bk / lead for bk in b[m:order + 1]]
