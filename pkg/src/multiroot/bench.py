"""Fixed-length benchmark runs of the compared methods on f1-f4."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .methods import COMPARED, MethodSpec
from .numerics import PrecisionConfig
from .problems import BENCHMARK_NAMES, builtin
from .solver import ExactHit, SolverConfig, acoc, coc, solve

# three reported errors; the fourth step feeds the COC/ACOC window x1..x4
REPORTED_STEPS = 3
BENCH_STEPS = 4

COLUMNS = ("problem", "method", "x0", "err1", "err2", "err3", "coc", "acoc")


def sci_short(x, ctx, digits: int = 3) -> str:
    """0.ddde-k shorthand with mantissa in [0.1, 1), truncated (not rounded) like the published table."""
    if x is None:
        return ""
    x = abs(x)
    if x == 0:
        return "0"
    e = int(ctx.floor(ctx.log10(x))) + 1
    mant = int(ctx.floor(x / ctx.mpf(10) ** e * 10**digits))
    # log10 rounding can misplace the decimal point by one
    if mant >= 10**digits:
        mant //= 10
        e += 1
    elif mant < 10 ** (digits - 1):
        mant = int(ctx.floor(x / ctx.mpf(10) ** (e - 1) * 10**digits))
        e -= 1
    return f"0.{mant:0{digits}d}e{e}"


def _order(fn, *args) -> str:
    try:
        return f"{float(fn(*args)):.4f}"
    except ExactHit:
        return "exact"
    except ValueError:
        return "n/a"


@dataclass(frozen=True)
class BenchRow:
    problem: str
    method: str
    x0: str
    errors: tuple  # formatted |x_n - alpha|, n = 1..3
    coc: str
    acoc: str

    def cells(self) -> list:
        errs = list(self.errors) + [""] * (REPORTED_STEPS - len(self.errors))
        return [self.problem, self.method, self.x0, *errs, self.coc, self.acoc]


@dataclass
class BenchReport:
    digits: int
    rows: list

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in self.rows:
            w.writerow(row.cells())
        return buf.getvalue()

    def to_markdown(self) -> str:
        head = ["problem", "method", "x0", "|x1-a|", "|x2-a|", "|x3-a|", "COC", "ACOC"]
        lines = [
            "| " + " | ".join(head) + " |",
            "|" + "|".join("---" for _ in head) + "|",
        ]
        for row in self.rows:
            lines.append("| " + " | ".join(row.cells()) + " |")
        return "\n".join(lines) + "\n"

    def cell(self, problem: str, method: str, column: str) -> str:
        for row in self.rows:
            if row.problem == problem and row.method == method:
                return row.cells()[COLUMNS.index(column)]
        raise KeyError((problem, method))


def bench_row(problem: str, spec: MethodSpec, cfg: PrecisionConfig) -> BenchRow:
    p = builtin(problem, cfg)
    ctx = cfg.ctx
    t = solve(p, spec, p.default_x0, SolverConfig(precision=cfg), fixed_steps=BENCH_STEPS)
    errors = tuple(sci_short(e, ctx) for e in t.errors[1:REPORTED_STEPS + 1])
    return BenchRow(
        problem=problem,
        method=spec.kind.value,
        x0=ctx.nstr(p.default_x0, 6),
        errors=errors,
        coc=_order(coc, t),
        acoc=_order(acoc, t),
    )


def run_bench(digits: int = 100, problems=BENCHMARK_NAMES, methods=COMPARED) -> BenchReport:
    cfg = PrecisionConfig(digits)
    rows = [bench_row(name, MethodSpec(kind), cfg) for name in problems for kind in methods]
    return BenchReport(digits, rows)
