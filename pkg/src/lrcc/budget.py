"""Work budgets for exhaustive oracles."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    """An oracle ran out of work budget.

    ``lower`` and ``upper`` bracket the quantity being computed when known.
    """

    def __init__(self, msg: str, lower: int | None = None, upper: int | None = None):
        super().__init__(msg)
        self.lower = lower
        self.upper = upper


def resolve_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("LRCC_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class Meter:
    """Counts units of work and raises once the limit is passed."""

    def __init__(self, limit: int | None = None):
        self.limit = resolve_budget(limit)
        self.used = 0

    def spend(self, units: int = 1) -> None:
        self.used += units
        if self.used > self.limit:
            raise BudgetExceeded(f"work budget {self.limit} exceeded")

    def affordable(self, units: int) -> bool:
        return self.used + units <= self.limit
