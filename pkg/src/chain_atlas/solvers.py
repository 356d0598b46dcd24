"""Exact solvers, the fan-out family and the Chin sufficient condition."""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

from .core import (
    ChainError,
    Instance,
    Ordering,
    Tree,
    chain_cost,
    enumerate_orderings,
    triplets_cost,
)


class Method(str, enum.Enum):
    DYNAMIC_PROGRAMMING = "dynamic-programming"
    BRUTE_FORCE = "brute-force"


@dataclass(frozen=True)
class SolveResult:
    optimal_cost: int
    optimal_ordering: Ordering
    method: Method


@dataclass(frozen=True)
class EssentialChoice:
    cost: int
    ordering: Ordering
    h: int


def _dp_tables(dims):
    n = len(dims) - 1
    # cost[i][j]: cheapest product of M_{i+1} .. M_j, i.e. span (i, j) of dims
    cost = [[0] * (n + 1) for _ in range(n + 1)]
    split = [[0] * (n + 1) for _ in range(n + 1)]
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            j = i + length
            ki_kj = dims[i] * dims[j]
            row_i = cost[i]
            best = None
            best_s = 0
            for s in range(i + 1, j):
                c = row_i[s] + cost[s][j] + ki_kj * dims[s]
                # strict < keeps the smallest split on ties
                if best is None or c < best:
                    best = c
                    best_s = s
            row_i[j] = best
            split[i][j] = best_s
    return cost, split


def optimal_cost(dims) -> int:
    """Cost of an optimal ordering, without reconstructing it."""
    cost, _ = _dp_tables(dims)
    return cost[0][len(dims) - 1]


def dp_solve(inst: Instance) -> SolveResult:
    """Cubic-time dynamic programme; ties pick the smallest split index."""
    cost, split = _dp_tables(inst.dims)
    n = inst.n

    def build(i: int, j: int) -> Tree:
        if j - i == 1:
            return j
        s = split[i][j]
        return (build(i, s), build(s, j))

    return SolveResult(cost[0][n], Ordering(build(0, n)), Method.DYNAMIC_PROGRAMMING)


def brute_force_solve(inst: Instance, limit: int | None = None) -> SolveResult:
    """Minimum over every enumerated ordering; the first one wins ties."""
    best = None
    best_o = None
    for o in enumerate_orderings(inst.n, limit):
        c = triplets_cost(o.triplets, inst.dims)
        if best is None or c < best:
            best, best_o = c, o
    return SolveResult(best, best_o, Method.BRUTE_FORCE)


def _right_assoc(leaves: list[int]) -> Tree:
    tree: Tree = leaves[-1]
    for leaf in reversed(leaves[:-1]):
        tree = (leaf, tree)
    return tree


def _left_assoc(leaves: list[int]) -> Tree:
    tree: Tree = leaves[0]
    for leaf in leaves[1:]:
        tree = (tree, leaf)
    return tree


@functools.lru_cache(maxsize=1024)
def fan_out(n: int, h: int) -> Ordering:
    """The ordering that fans out from dimension ``k_h``.

    ``M_1 .. M_h`` are multiplied right to left, ``M_{h+1} .. M_n`` left to
    right, and the two partial products last. ``h = 0`` is the plain
    left-to-right ordering, ``h = n`` right-to-left.
    """
    if n < 2:
        raise ChainError(f"chain length must be at least 2, got {n}")
    if not 0 <= h <= n:
        raise ChainError(f"h must lie in 0..{n}, got {h}")
    left = list(range(1, h + 1))
    right = list(range(h + 1, n + 1))
    if not left:
        return Ordering(_left_assoc(right))
    if not right:
        return Ordering(_right_assoc(left))
    return Ordering((_right_assoc(left), _left_assoc(right)))


@functools.lru_cache(maxsize=1024)
def fan_out_triplets(n: int, h: int) -> tuple:
    """Closed-form triplets of ``fan_out(n, h)``, sorted ascending."""
    ts = {(i - 1, i, h) for i in range(1, h)}
    ts |= {(h, j - 1, j) for j in range(h + 2, n + 1)}
    if 1 <= h <= n - 1:
        ts.add((0, h, n))
    return tuple(sorted(ts))


def essential_set(n: int) -> list[tuple[int, Ordering]]:
    """Distinct fan-out orderings, each labelled with its smallest ``h``."""
    seen = set()
    out = []
    for h in range(n + 1):
        o = fan_out(n, h)
        if o not in seen:
            seen.add(o)
            out.append((h, o))
    return out


def essential_aliases(n: int) -> dict[Ordering, list[int]]:
    """Map each distinct fan-out ordering to every ``h`` that produces it."""
    out: dict[Ordering, list[int]] = {}
    for h in range(n + 1):
        out.setdefault(fan_out(n, h), []).append(h)
    return out


def essential_count(n: int) -> int:
    return n - 1 if n <= 3 else n + 1


def best_essential(inst: Instance) -> EssentialChoice:
    """Cheapest fan-out ordering on ``inst``.

    On ties the fan-out from the smallest dimension is preferred, then the
    smallest ``h``.
    """
    n = inst.n
    dims = inst.dims
    m = inst.argmin
    best = None
    for h in range(n + 1):
        c = triplets_cost(fan_out_triplets(n, h), dims)
        if best is None or c < best[0] or (c == best[0] and h == m):
            best = (c, h)
    c, h = best
    return EssentialChoice(c, fan_out(n, h), h)


def chandra_cost(inst: Instance) -> int:
    """Cost of the fan-out from the smallest dimension."""
    return chain_cost(fan_out(inst.n, inst.argmin), inst)


def chin_condition(inst: Instance, i: int) -> bool:
    """Sufficient condition for ``M_i M_{i+1}`` to be in every optimal ordering.

    Indices wrap modulo ``n + 1``. The reciprocal inequality is compared after
    multiplying through by the (positive) product of the four dimensions.
    """
    n = inst.n
    if not 0 <= i <= n:
        raise IndexError(f"index {i} out of range 0..{n}")
    k = inst.dims
    ki = k[i]
    kl = k[(i - 1) % (n + 1)]
    kr = k[(i + 1) % (n + 1)]
    km = k[inst.argmin]
    if not (ki > kl and ki > kr):
        return False
    # 1/ki < 1/kl + 1/kr - 1/km, scaled by ki*kl*kr*km
    return kl * kr * km < ki * kr * km + ki * kl * km - ki * kl * kr
