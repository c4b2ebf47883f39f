"""Core domain model: universes, hash functions, key sets, loads, and families.

Keys are dense 1-based integers 1..u, cells are 1..m.  The ideality factor c
is an exact rational throughout; a function is c-ideal for a key set when its
maximum cell load is at most c*alpha with alpha = n/m (integer loads make
this the same as load <= floor(c*alpha)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import InitVar, dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .combinatorics import binom
from .errors import BudgetExceededError, DimensionMismatchError

DEFAULT_ENUM_BUDGET = 10**6


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        return Fraction(c).limit_denominator(10**12)
    return Fraction(c)


@dataclass(frozen=True)
class Params:
    """Problem parameters: universe size u, table size m, key-set size n, factor c.

    Standing assumptions: n >= m >= 1 and u >= n.  Pass strict_universe=True
    to additionally require u >= n**2 (the regime where an adversarial key
    set inside one fiber always exists).
    """

    u: int
    m: int
    n: int
    c: Fraction = Fraction(1)
    strict_universe: InitVar[bool] = False

    def __post_init__(self, strict_universe: bool) -> None:
        object.__setattr__(self, "c", _as_fraction(self.c))
        if self.m < 1:
            raise ValueError("need m >= 1")
        if self.n < self.m:
            raise ValueError("need n >= m")
        if self.u < self.n:
            raise ValueError("need u >= n")
        if self.c < 1:
            raise ValueError("need c >= 1")
        if strict_universe and self.u < self.n * self.n:
            raise ValueError("strict mode requires u >= n**2")

    @property
    def alpha(self) -> Fraction:
        """Average load n/m, exact."""
        return Fraction(self.n, self.m)

    @property
    def load_cap(self) -> int:
        """floor(c * alpha): the largest integer load a c-ideal function allows."""
        return math.floor(self.c * self.alpha)

    @property
    def total_sets(self) -> int:
        return binom(self.u, self.n)


@dataclass(frozen=True)
class Decomposition:
    """Fiber sizes (beta_1..beta_m) of a hash function; sums to u."""

    betas: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b < 0 for b in self.betas):
            raise ValueError("fiber sizes must be non-negative")

    @property
    def u(self) -> int:
        return sum(self.betas)

    @property
    def m(self) -> int:
        return len(self.betas)

    @property
    def is_balanced(self) -> bool:
        return max(self.betas) - min(self.betas) <= 1


@dataclass(frozen=True)
class HashFunction:
    """Total map from keys 1..u to cells 1..m, stored as the cell of each key."""

    cells: tuple[int, ...]
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("need m >= 1")
        if any(c < 1 or c > self.m for c in self.cells):
            raise ValueError("cell indices must lie in 1..m")

    @property
    def u(self) -> int:
        return len(self.cells)

    def apply(self, key: int) -> int:
        return self.cells[key - 1]

    def fibers(self) -> tuple[tuple[int, ...], ...]:
        """Keys per cell, 1-based, ascending within each fiber."""
        parts: list[list[int]] = [[] for _ in range(self.m)]
        for key, cell in enumerate(self.cells, start=1):
            parts[cell - 1].append(key)
        return tuple(tuple(p) for p in parts)

    def decomposition(self) -> Decomposition:
        betas = [0] * self.m
        for cell in self.cells:
            betas[cell - 1] += 1
        return Decomposition(tuple(betas))

    @property
    def is_balanced(self) -> bool:
        return self.decomposition().is_balanced

    def partition_signature(self) -> tuple[tuple[int, ...], ...]:
        """Cell-label-free identity: the sorted tuple of non-empty fibers.

        Max load is invariant under relabeling cells, so exhaustive searches
        deduplicate candidates by this signature.
        """
        return tuple(sorted(f for f in self.fibers() if f))


@dataclass(frozen=True)
class KeySet:
    """A strictly increasing tuple of distinct keys."""

    keys: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(k < 1 for k in self.keys):
            raise ValueError("keys are 1-based positive integers")
        if any(a >= b for a, b in zip(self.keys, self.keys[1:])):
            raise ValueError("keys must be strictly increasing")

    @property
    def n(self) -> int:
        return len(self.keys)


@dataclass(frozen=True)
class LoadProfile:
    """Per-cell loads of one key set under one hash function."""

    loads: tuple[int, ...]

    @property
    def max_load(self) -> int:
        return max(self.loads)

    @property
    def n(self) -> int:
        return sum(self.loads)


@dataclass(frozen=True)
class Family:
    """An ordered family of hash functions with a provenance tag."""

    functions: tuple[HashFunction, ...]
    provenance: str = "explicit"

    def __post_init__(self) -> None:
        if not self.functions:
            raise ValueError("a family holds at least one function")
        m = self.functions[0].m
        u = self.functions[0].u
        if any(h.m != m or h.u != u for h in self.functions):
            raise DimensionMismatchError("family members disagree on u or m")

    @property
    def size(self) -> int:
        return len(self.functions)


def load_profile(h: HashFunction, s: KeySet) -> LoadProfile:
    """Count how many keys of s land in each cell of h."""
    if s.keys and s.keys[-1] > h.u:
        raise DimensionMismatchError("key set exceeds the function's universe")
    loads = [0] * h.m
    for key in s.keys:
        loads[h.cells[key - 1] - 1] += 1
    return LoadProfile(tuple(loads))


def is_c_ideal(h: HashFunction, s: KeySet, p: Params) -> bool:
    """True iff max load <= c*alpha, compared as exact rationals."""
    if h.u != p.u or h.m != p.m or s.n != p.n:
        raise DimensionMismatchError("function/key-set dimensions do not match params")
    return load_profile(h, s).max_load <= p.c * p.alpha


def all_key_sets(p: Params, budget: int = DEFAULT_ENUM_BUDGET) -> Iterator[KeySet]:
    """All n-subsets of 1..u in lexicographic order; guarded by an enumeration budget."""
    total = binom(p.u, p.n)
    if total > budget:
        raise BudgetExceededError(
            f"C({p.u},{p.n}) = {total} exceeds enumeration budget {budget}"
        )
    for combo in itertools.combinations(range(1, p.u + 1), p.n):
        yield KeySet(combo)


def family_cost(
    f: Family,
    p: Params,
    sets: Iterable[KeySet] | None = None,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> int:
    """Exact max over key sets of the min over family members of the max load."""
    if sets is None:
        sets = all_key_sets(p, budget)
    worst = 0
    for s in sets:
        best = min(load_profile(h, s).max_load for h in f.functions)
        if best > worst:
            worst = best
    return worst


def balanced_fiber_sizes(u: int, m: int) -> tuple[int, ...]:
    """Canonical balanced size vector: ceil(u/m) repeated (u mod m) times, then floor."""
    q, r = divmod(u, m)
    return tuple([q + 1] * r + [q] * (m - r))


def _ordered_partitions(
    keys: tuple[int, ...], sizes: tuple[int, ...]
) -> Iterator[tuple[tuple[int, ...], ...]]:
    if not sizes:
        yield ()
        return
    head_size, rest = sizes[0], sizes[1:]
    for head in itertools.combinations(keys, head_size):
        chosen = set(head)
        remaining = tuple(k for k in keys if k not in chosen)
        for tail in _ordered_partitions(remaining, rest):
            yield (head,) + tail


def balanced_functions(p: Params) -> Iterator[HashFunction]:
    """All functions whose fibers carry the canonical balanced size vector.

    One function per ordered partition of 1..u into fibers of those sizes;
    the first yielded is the lexicographic blocked function (cell 1 gets the
    lowest keys, and so on).
    """
    sizes = balanced_fiber_sizes(p.u, p.m)
    keys = tuple(range(1, p.u + 1))
    for parts in _ordered_partitions(keys, sizes):
        cells = [0] * p.u
        for cell_index, part in enumerate(parts, start=1):
            for key in part:
                cells[key - 1] = cell_index
        yield HashFunction(tuple(cells), p.m)


def blocked_function(p: Params) -> HashFunction:
    """The lexicographic blocked balanced function: 1..s1 -> 1, next s2 -> 2, ..."""
    sizes = balanced_fiber_sizes(p.u, p.m)
    cells: list[int] = []
    for cell_index, size in enumerate(sizes, start=1):
        cells.extend([cell_index] * size)
    return HashFunction(tuple(cells), p.m)


def all_functions(u: int, m: int, budget: int = DEFAULT_ENUM_BUDGET) -> Iterator[HashFunction]:
    """Every function from 1..u to 1..m (m**u of them); budget-guarded."""
    if m**u > budget:
        raise BudgetExceededError(f"m**u = {m**u} exceeds budget {budget}")
    for cells in itertools.product(range(1, m + 1), repeat=u):
        yield HashFunction(cells, m)


# --- text serialization -----------------------------------------------------
#
# A hash function is one line of whitespace-separated cell indices; a family
# is one function per line.  Used by the CLI verify/construct round trips.


def function_to_text(h: HashFunction) -> str:
    return " ".join(str(c) for c in h.cells)


def function_from_text(line: str, m: int) -> HashFunction:
    cells = tuple(int(tok) for tok in line.split())
    if not cells:
        raise ValueError("empty hash-function line")
    return HashFunction(cells, m)


def family_to_text(f: Family) -> str:
    return "\n".join(function_to_text(h) for h in f.functions) + "\n"


def family_from_text(text: str, m: int, provenance: str = "explicit") -> Family:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    return Family(tuple(function_from_text(ln, m) for ln in lines), provenance)
