"""Build instances on which a given ordering is the unique optimum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    ChainError,
    Instance,
    Ordering,
    Triplet,
    enumeration_limit,
    enumerate_orderings,
    triplets_cost,
)
from .solvers import chin_condition


@dataclass(frozen=True)
class GrowthSequence:
    """Increasing rationals ``R_0 = 1 < ... < R_{n-1} = 2`` and their integer
    multiples ``L = scale * R``.

    ``rationals`` holds unreduced ``(numerator, denominator)`` pairs as the
    closed form produces them; ``scale`` is the lcm of those denominators.
    """

    rationals: tuple[tuple[int, int], ...]
    integers: tuple[int, ...]
    scale: int

    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(p, q) for p, q in self.rationals)


def growth_sequence(n: int) -> GrowthSequence:
    if n < 3:
        raise ChainError(f"growth sequences are defined for n >= 3, got {n}")
    pairs = []
    for ell in range(n):
        num = 2**n + ell - n - 1
        den = 2**n + ell - n - 2**ell
        pairs.append((num, den))
    scale = math.lcm(*(den for _, den in pairs))
    ints = tuple(scale * num // den for num, den in pairs)
    return GrowthSequence(tuple(pairs), ints, scale)


def satisfies_reciprocal_bound(x: int, y: int, z: int, base: int) -> bool:
    """``1/x < 1/y + 1/z - 1/base`` in exact integer arithmetic."""
    return y * z * base < x * z * base + x * y * base - x * y * z


def elimination_order(o: Ordering) -> list[Triplet]:
    """Multiplications of ``o`` in the order they are contracted.

    At every step the eliminable pair (both operands already formed) with the
    smallest left index in the reduced chain is taken.
    """
    pending = sorted(o.triplets)
    n = o.n
    alive = [True] * (n + 1)
    order = []
    while pending:
        for idx, (a, b, c) in enumerate(pending):
            # eliminable iff no boundary between a..b or b..c survives
            if not any(alive[a + 1 : b]) and not any(alive[b + 1 : c]):
                break
        else:  # pragma: no cover - unreachable for a valid ordering
            raise ChainError("ordering has no eliminable multiplication")
        order.append(pending.pop(idx))
        alive[b] = False
    return order


def synthesize(o: Ordering) -> Instance:
    """An instance on which ``o`` is uniquely optimal.

    Middle dimensions receive ``L_{n-1}, L_{n-2}, ..., L_1`` in elimination
    order and both outer dimensions receive ``L_0``.
    """
    n = o.n
    if n <= 2:
        return Instance((1,) * (n + 1))
    seq = growth_sequence(n).integers
    dims = [0] * (n + 1)
    for step, (_, b, _) in enumerate(elimination_order(o)):
        dims[b] = seq[n - 1 - step]
    dims[0] = dims[n] = seq[0]
    return Instance(tuple(dims))


@dataclass(frozen=True)
class Verification:
    ok: bool
    method: str  # "brute-force" or "chin"

    def __bool__(self) -> bool:
        return self.ok


def _verify_brute_force(o: Ordering, inst: Instance, limit: int | None) -> bool:
    target = triplets_cost(o.triplets, inst.dims)
    for other in enumerate_orderings(inst.n, limit):
        if other == o:
            continue
        if triplets_cost(other.triplets, inst.dims) <= target:
            return False
    return True


def _verify_chin(o: Ordering, inst: Instance) -> bool:
    # Each step: the pair must be forced on the current reduced chain; the
    # optimal orderings then correspond to optimal orderings of the contracted
    # chain, so the argument repeats until one multiplication is left.
    bounds = list(range(inst.n + 1))
    for a, b, c in elimination_order(o):
        if len(bounds) == 3:
            break
        pos = bounds.index(b)
        reduced = Instance(tuple(inst.dims[x] for x in bounds))
        if not chin_condition(reduced, pos):
            return False
        bounds.pop(pos)
    return True


def verify_uniquely_optimal(
    o: Ordering,
    inst: Instance,
    method: str = "auto",
    limit: int | None = None,
) -> Verification:
    """Check that ``o`` is strictly cheaper than every other ordering on ``inst``.

    ``method="auto"`` enumerates when ``n`` is within the enumeration limit and
    otherwise falls back to the Chin condition along the elimination sequence,
    which is sufficient but not necessary. ``"brute-force"`` never falls back.
    """
    if o.n != inst.n:
        raise ChainError(f"ordering has {o.n} matrices but the instance has {inst.n}")
    if method not in ("auto", "brute-force", "chin"):
        raise ValueError(f"unknown method {method!r}")
    if method == "chin" or (method == "auto" and inst.n > enumeration_limit(limit)):
        return Verification(_verify_chin(o, inst), "chin")
    return Verification(_verify_brute_force(o, inst, limit), "brute-force")
