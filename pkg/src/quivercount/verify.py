"""Formula-vs-oracle verification harness.

For every dimension vector in the slope cone up to the budgeted height and
every configured prime, the exact rational-function values are evaluated at
the prime and compared with brute-force counts:

* point ratio          #R / #GL
* semistable ratio     #semistable / #GL
* class counts         absolutely stable, and stable with endomorphism
                       field of degree r >= 2 where the dimension divides.

Rows whose enumeration would exceed the budget are reported as skipped,
never silently dropped; a report is OK when no comparison failed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .counting import (
    CountingContext,
    CountTable,
    absolutely_stable_table,
    rep_ratio,
    semistable_ratio,
    stable_end_degree_poly,
)
from .oracle import (
    DEFAULT_BUDGET,
    Budget,
    BudgetError,
    count_absolutely_stable,
    count_semistable_ratio,
    count_stable_with_end_dim,
    enumerate_points,
    gl_order,
    rep_space_dim,
)
from .qpoly import QPoly
from .series import DimVector, height

_ENUMERATION_CAP = 1 << 16


@dataclass(frozen=True)
class VerificationRow:
    quantity: str
    alpha: DimVector
    p: int
    formula: str
    oracle: str
    match: Optional[bool]  # None when the row was skipped
    note: str = ""

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity,
            "alpha": list(self.alpha),
            "p": self.p,
            "formula": self.formula,
            "oracle": self.oracle,
            "match": self.match,
            "note": self.note,
        }


@dataclass(frozen=True)
class VerificationReport:
    rows: tuple[VerificationRow, ...]

    @property
    def ok(self) -> bool:
        return all(row.match is not False for row in self.rows)

    @property
    def n_checked(self) -> int:
        return sum(1 for row in self.rows if row.match is not None)

    @property
    def n_skipped(self) -> int:
        return sum(1 for row in self.rows if row.match is None)

    def failures(self) -> list[VerificationRow]:
        return [row for row in self.rows if row.match is False]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.n_checked,
            "skipped": self.n_skipped,
            "rows": [row.to_json() for row in self.rows],
        }


def _tampered(table: CountTable) -> CountTable:
    # Test hook: corrupt the first entry so mismatch reporting can be exercised.
    entries = dict(table.entries)
    first = min(entries, key=lambda a: (height(a), a))
    entries[first] = entries[first] + QPoly.one()
    return CountTable(entries, table.provenance + "+corrupted", table.context)


def run_verification(ctx: CountingContext, primes: Sequence[int],
                     budget: Budget = DEFAULT_BUDGET,
                     max_end_degree: int = 4,
                     tamper: bool = False) -> VerificationReport:
    table = absolutely_stable_table(ctx)
    if tamper:
        table = _tampered(table)
    quiver, theta = ctx.quiver, ctx.theta
    rows: list[VerificationRow] = []

    def add(quantity, alpha, p, formula_value, compute_oracle):
        try:
            oracle_value = compute_oracle()
        except BudgetError as exc:
            rows.append(VerificationRow(quantity, alpha, p, str(formula_value),
                                        "-", None, f"skipped: {exc}"))
            return
        rows.append(VerificationRow(quantity, alpha, p, str(formula_value),
                                    str(oracle_value),
                                    formula_value == oracle_value))

    for p in primes:
        bound = min(ctx.trunc.max_height, budget.stable_height(p))
        for alpha in ctx.trunc.vectors():
            h = height(alpha)
            if h == 0 or h > bound:
                continue

            def t_oracle(alpha=alpha, p=p):
                if p ** rep_space_dim(quiver, alpha) > _ENUMERATION_CAP:
                    raise BudgetError("point stream too long to enumerate")
                n = sum(1 for _ in enumerate_points(quiver, alpha, p, budget))
                return Fraction(n, gl_order(alpha, p))

            add("points/GL", alpha, p, rep_ratio(quiver, alpha).evaluate(p), t_oracle)
            add("semistable/GL", alpha, p, semistable_ratio(ctx, alpha).evaluate(p),
                lambda alpha=alpha, p=p: count_semistable_ratio(
                    quiver, alpha, theta, p, budget))
            add("abs-stable classes", alpha, p, table.poly(alpha).evaluate(p),
                lambda alpha=alpha, p=p: count_absolutely_stable(
                    quiver, alpha, theta, p, budget))
            for r in range(2, max_end_degree + 1):
                if any(a % r for a in alpha):
                    continue
                base = tuple(a // r for a in alpha)
                if not ctx.trunc.admits(base):
                    continue
                s_poly = stable_end_degree_poly(ctx, table, base, r)
                add(f"stable classes end-degree {r}", alpha, p,
                    s_poly.evaluate(p),
                    lambda alpha=alpha, p=p, r=r: count_stable_with_end_dim(
                        quiver, alpha, theta, p, r, budget))
    return VerificationReport(tuple(rows))
