"""Instances, orderings, flop costs and exhaustive enumeration of matrix chains.

An ordering is stored as a nested tuple: a leaf is the (1-based) matrix index,
an internal node is a ``(left, right)`` pair. Every internal node that covers
leaves ``a+1 .. c`` with its split after leaf ``b`` multiplies a
``k_a x k_b`` block with a ``k_b x k_c`` block and is identified by the
triplet ``(a, b, c)``.
"""

from __future__ import annotations

import functools
import os
import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

Tree = Union[int, tuple]
Triplet = tuple[int, int, int]

DEFAULT_ENUM_LIMIT = 15
ENUM_LIMIT_ENV = "CHAIN_ATLAS_ENUM_LIMIT"


class ChainError(ValueError):
    """Base class for invalid chain input."""


class ParseError(ChainError):
    pass


class EnumerationLimitError(ChainError):
    """Raised when exhaustive enumeration is requested beyond the limit."""


def enumeration_limit(limit: int | None = None) -> int:
    """Resolve the enumeration limit: explicit value, then env var, then default."""
    if limit is not None:
        return limit
    raw = os.environ.get(ENUM_LIMIT_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_ENUM_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise ChainError(f"{ENUM_LIMIT_ENV} must be an integer, got {raw!r}") from None


def check_limit(n: int, limit: int | None = None) -> None:
    lim = enumeration_limit(limit)
    if n > lim:
        raise EnumerationLimitError(
            f"chain length {n} exceeds the enumeration limit {lim} "
            f"(raise it with --limit or {ENUM_LIMIT_ENV})"
        )


@dataclass(frozen=True)
class Instance:
    """Dimension tuple ``(k_0, ..., k_n)``; matrix ``M_i`` is ``k_{i-1} x k_i``."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(self.dims)
        if len(dims) < 3:
            raise ChainError(f"an instance needs at least 3 dimensions, got {len(dims)}")
        for d in dims:
            if isinstance(d, bool) or not isinstance(d, int):
                raise ChainError(f"dimensions must be integers, got {d!r}")
            if d < 1:
                raise ChainError(f"dimensions must be positive, got {d}")
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims) - 1

    @property
    def argmin(self) -> int:
        """Index of the smallest dimension; the smallest index wins ties."""
        return min(range(len(self.dims)), key=self.dims.__getitem__)

    def scaled(self, alpha: int) -> Instance:
        return Instance(tuple(alpha * d for d in self.dims))

    def __getitem__(self, i: int) -> int:
        return self.dims[i]

    def __str__(self) -> str:
        return ",".join(map(str, self.dims))


def parse_instance(text: str) -> Instance:
    """Parse ``"10,100,5,50"`` or ``"10 100 5 50"`` into an :class:`Instance`."""
    parts = [p for p in re.split(r"[\s,;]+", text.strip()) if p]
    if not parts:
        raise ParseError("empty dimension list")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise ParseError(f"dimensions must be integers: {text!r}") from None
    try:
        return Instance(dims)
    except ChainError as exc:
        raise ParseError(str(exc)) from None


def _count_leaves(tree: Tree) -> int:
    if isinstance(tree, int):
        return 1
    return _count_leaves(tree[0]) + _count_leaves(tree[1])


def _leaves(tree: Tree) -> Iterator[int]:
    if isinstance(tree, int):
        yield tree
    else:
        yield from _leaves(tree[0])
        yield from _leaves(tree[1])


@dataclass(frozen=True)
class Ordering:
    """A full parenthesisation of ``M_1 ... M_n``."""

    tree: Tree

    def __post_init__(self):
        _validate_tree(self.tree)
        leaves = list(_leaves(self.tree))
        if leaves != list(range(1, len(leaves) + 1)):
            raise ChainError(f"leaves must read 1..n left to right, got {leaves}")
        if len(leaves) < 2:
            raise ChainError("an ordering needs at least two matrices")

    @functools.cached_property
    def n(self) -> int:
        return _count_leaves(self.tree)

    @functools.cached_property
    def triplets(self) -> frozenset[Triplet]:
        return frozenset(ordering_to_triplets(self))

    def __str__(self) -> str:
        return render_ordering(self)


def _validate_tree(tree) -> None:
    if isinstance(tree, bool):
        raise ChainError("tree leaves must be integers")
    if isinstance(tree, int):
        return
    if not isinstance(tree, tuple) or len(tree) != 2:
        raise ChainError(f"internal nodes must be (left, right) pairs, got {tree!r}")
    _validate_tree(tree[0])
    _validate_tree(tree[1])


def ordering_to_triplets(o: Ordering) -> list[Triplet]:
    """Triplets ``(a, b, c)`` of every multiplication, in post-order."""
    out: list[Triplet] = []

    def walk(tree: Tree, a: int) -> int:
        # returns c, the index of the last leaf covered
        if isinstance(tree, int):
            return a + 1
        b = walk(tree[0], a)
        c = walk(tree[1], b)
        out.append((a, b, c))
        return c

    walk(o.tree, 0)
    return out


def ordering_from_triplets(triplets) -> Ordering:
    """Rebuild the tree from a valid triplet set."""
    split = {}
    for a, b, c in triplets:
        if (a, c) in split:
            raise ChainError(f"two multiplications cover the same span ({a}, {c})")
        split[(a, c)] = b
    if not split:
        raise ChainError("empty triplet set")
    n = max(c for _, c in split)

    def build(a: int, c: int) -> Tree:
        if c - a == 1:
            return c
        try:
            b = split[(a, c)]
        except KeyError:
            raise ChainError(f"no multiplication covers span ({a}, {c})") from None
        return (build(a, b), build(b, c))

    tree = build(0, n)
    if _count_leaves(tree) - 1 != len(split):
        raise ChainError("triplet set contains multiplications outside the tree")
    return Ordering(tree)


def cost_triplet(inst: Instance, a: int, b: int, c: int) -> int:
    """Scalar multiplications ``k_a * k_b * k_c``."""
    n = inst.n
    for idx in (a, b, c):
        if not 0 <= idx <= n:
            raise IndexError(f"index {idx} out of range 0..{n}")
    k = inst.dims
    return k[a] * k[b] * k[c]


def triplets_cost(triplets, dims: Sequence[int]) -> int:
    return sum(dims[a] * dims[b] * dims[c] for a, b, c in triplets)


def chain_cost(o: Ordering, inst: Instance) -> int:
    if o.n != inst.n:
        raise ChainError(f"ordering has {o.n} matrices but the instance has {inst.n}")
    return triplets_cost(o.triplets, inst.dims)


def catalan(m: int) -> int:
    # C_m = binom(2m, m) / (m + 1)
    from math import comb

    return comb(2 * m, m) // (m + 1)


@functools.lru_cache(maxsize=None)
def _trees(lo: int, hi: int) -> tuple[Tree, ...]:
    if lo == hi:
        return (lo,)
    out = []
    for s in range(lo, hi):
        for left in _trees(lo, s):
            for right in _trees(s + 1, hi):
                out.append((left, right))
    return tuple(out)


def enumerate_orderings(n: int, limit: int | None = None) -> tuple[Ordering, ...]:
    """All ``C_{n-1}`` orderings of an ``n``-chain.

    Order is by outermost split position ascending, then left subtree, then
    right subtree, so ``M1 (M2 (... Mn))`` comes first.
    """
    if n < 2:
        raise ChainError(f"chain length must be at least 2, got {n}")
    check_limit(n, limit)
    return _orderings_cached(n)


@functools.lru_cache(maxsize=16)
def _orderings_cached(n: int) -> tuple[Ordering, ...]:
    trees = _trees(1, n)
    if n > 12:
        # the memo for large spans would pin gigabytes of tuples
        _trees.cache_clear()
    return tuple(Ordering(t) for t in trees)


def render_ordering(o: Ordering) -> str:
    """Render with the outermost pair of parentheses omitted."""

    def go(tree: Tree) -> str:
        if isinstance(tree, int):
            return f"M{tree}"
        return f"({go(tree[0])} {go(tree[1])})"

    t = o.tree
    return f"{go(t[0])} {go(t[1])}"


_TOKEN = re.compile(r"\s*(?:(\()|(\))|M(\d+)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        lpar, rpar, leaf, junk = m.groups()
        if junk is not None:
            raise ParseError(f"unexpected character {junk!r} at offset {m.start(4)}")
        if lpar:
            tokens.append("(")
        elif rpar:
            tokens.append(")")
        else:
            tokens.append(int(leaf))
        pos = m.end()
    return tokens


def parse_ordering(text: str) -> Ordering:
    """Parse text such as ``"((M1 M2) M3) M4"`` or ``"(M1 M2)(M3 M4)"``.

    Every group must hold exactly two operands; the outermost parentheses are
    optional.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty ordering")
    pos = 0

    def parse_seq(closing: bool) -> list:
        nonlocal pos
        items = []
        while pos < len(tokens):
            tok = tokens[pos]
            if tok == ")":
                if not closing:
                    raise ParseError("unbalanced ')'")
                pos += 1
                return items
            pos += 1
            if tok == "(":
                inner = parse_seq(True)
                items.append(_group(inner))
            else:
                items.append(tok)
        if closing:
            raise ParseError("missing ')'")
        return items

    def _group(items: list) -> Tree:
        if len(items) == 1:
            # redundant parentheses around a single operand
            return items[0]
        if len(items) != 2:
            raise ParseError(f"each group must have exactly two operands, got {len(items)}")
        return (items[0], items[1])

    top = parse_seq(False)
    tree = _group(top)
    if isinstance(tree, int):
        raise ParseError("an ordering needs at least two matrices")
    leaves = list(_leaves(tree))
    if leaves != list(range(1, len(leaves) + 1)):
        raise ParseError(f"matrices must appear as M1..Mn in order, got {leaves}")
    return Ordering(tree)
