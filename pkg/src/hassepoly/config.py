"""Runtime budgets and cache location.

Budgets are plain module-level configuration so callers (and the CLI) can
raise or lower them without threading arguments through every call.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path


class BudgetExceeded(RuntimeError):
    """A computation would exceed one of the configured budgets."""


def _env_cache_dir() -> Path | None:
    value = os.environ.get("DWORK_CACHE")
    return Path(value) if value else None


@dataclass
class Config:
    # enumeration steps for expsum_direct, i.e. (q^k - 1)^m
    step_budget: int = 10**9
    # entries in a single field/Kloosterman table (p=3, k=16 is 43M)
    table_budget: int = 2**26
    # lattice points visited when enumerating a dilated polytope
    box_budget: int = 10**8
    # solution vectors visited in one Frobenius entry
    solution_budget: int = 10**7
    cache_dir: Path | None = field(default_factory=_env_cache_dir)


config = Config()


def check_budget(amount: int, limit: int, what: str) -> None:
    if amount > limit:
        raise BudgetExceeded(f"{what}: {amount} exceeds budget {limit}")
