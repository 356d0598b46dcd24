"""Relative cost increase when some orderings are forbidden."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import ChainError, Instance, Ordering, enumerate_orderings, triplets_cost
from .solvers import best_essential, essential_set, optimal_cost


@dataclass(frozen=True)
class PenaltyReport:
    optimal_cost: int
    restricted_cost: int
    penalty: Fraction
    removed_description: str

    @property
    def decimal(self) -> str:
        return format_decimal(self.penalty)


def format_decimal(x: Fraction, places: int = 6) -> str:
    """Fixed-point rendering, rounded half to even."""
    scaled = round(x * 10**places)  # Fraction.__round__ is half-to-even
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def penalty_of_removal(
    inst: Instance,
    removed: Iterable[Ordering],
    description: str | None = None,
    limit: int | None = None,
) -> PenaltyReport:
    removed = set(removed)
    for o in removed:
        if o.n != inst.n:
            raise ChainError(f"removed ordering {o} does not match n={inst.n}")
    restricted = None
    for o in enumerate_orderings(inst.n, limit):
        if o in removed:
            continue
        c = triplets_cost(o.triplets, inst.dims)
        if restricted is None or c < restricted:
            restricted = c
    if restricted is None:
        raise ChainError("the removed set covers every ordering")
    opt = optimal_cost(inst.dims)
    if description is None:
        description = "{" + ", ".join(sorted(str(o) for o in removed)) + "}"
    return PenaltyReport(opt, restricted, Fraction(restricted, opt) - 1, description)


def penalty_nonessential_removed(inst: Instance) -> PenaltyReport:
    """Penalty of keeping only the fan-out family; always below 1."""
    opt = optimal_cost(inst.dims)
    best = best_essential(inst).cost
    return PenaltyReport(opt, best, Fraction(best, opt) - 1, "non-essential")


def nonessential_orderings(n: int, limit: int | None = None) -> list[Ordering]:
    essential = {o for _, o in essential_set(n)}
    return [o for o in enumerate_orderings(n, limit) if o not in essential]
