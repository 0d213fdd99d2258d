"""Truncation windows and stabilization bookkeeping.

Graded pieces of localizations (and of rings with negative-weight variables)
are infinite dimensional, so every dimension here is computed under a
per-variable exponent bound B and re-computed at increasing bounds.  A value
is declared stable when two consecutive bounds agree; anything that never
stabilizes before max_bound is reported INCONCLUSIVE, never silently
accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, List, Tuple

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


def combine_verdicts(verdicts) -> str:
    verdicts = list(verdicts)
    if any(v == FAIL for v in verdicts):
        return FAIL
    if any(v == INCONCLUSIVE for v in verdicts):
        return INCONCLUSIVE
    return PASS


@dataclass(frozen=True)
class Truncation:
    """Exponent window: start at bound, grow by step, give up past max_bound."""

    bound: int
    step: int = 1
    max_bound: int = 12

    def __post_init__(self):
        if self.bound < 1 or self.step < 1 or self.bound > self.max_bound:
            raise ValueError(f"invalid truncation {self}")

    def bounds(self) -> Iterator[int]:
        b = self.bound
        while b <= self.max_bound:
            yield b
            b += self.step


@dataclass
class StabilizedDims:
    """History of (bound, value); stable when the last two values agree."""

    history: List[Tuple[int, Any]] = field(default_factory=list)

    def record(self, bound: int, value: Any) -> None:
        if self.history and bound <= self.history[-1][0]:
            raise ValueError("bounds must be strictly increasing")
        self.history.append((bound, value))

    @property
    def stable(self) -> bool:
        return len(self.history) >= 2 and self.history[-1][1] == self.history[-2][1]

    @property
    def value(self) -> Any:
        if not self.history:
            return None
        return self.history[-1][1]

    def to_dict(self) -> dict:
        return {"history": [[b, v] for b, v in self.history], "stable": self.stable}


def stabilize(fn: Callable[[int], Any], trunc: Truncation) -> StabilizedDims:
    """Evaluate fn at growing bounds until two consecutive values agree."""
    out = StabilizedDims()
    for b in trunc.bounds():
        out.record(b, fn(b))
        if out.stable:
            break
    return out


def split_table(stab: StabilizedDims, keys) -> dict:
    """Split a stabilized dict-valued history into per-key StabilizedDims."""
    per_key = {}
    for key in keys:
        cell = StabilizedDims()
        for bound, table in stab.history:
            cell.record(bound, table.get(key, 0))
        per_key[key] = cell
    return per_key
