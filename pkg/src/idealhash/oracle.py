"""Exact brute-force ground truth: ideality counts, coverage, minimal family sizes.

Everything here is exact integer/rational arithmetic.  The counting core is a
polynomial convolution: cell i with fiber size beta_i contributes the capped
polynomial sum_{l<=cap} C(beta_i, l) x^l, and the number of key sets hashed
with every load at most cap is the coefficient of x^n in the product.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .combinatorics import binom
from .errors import BudgetExceededError
from .hashspace import (
    DEFAULT_ENUM_BUDGET,
    Decomposition,
    Family,
    HashFunction,
    KeySet,
    Params,
    all_functions,
    balanced_fiber_sizes,
)

DEFAULT_POOL_BUDGET = 10**4


@dataclass(frozen=True)
class IdealCount:
    """How many of the C(u,n) key sets one balanced function hashes within cap."""

    m_c: int
    total: int

    def __post_init__(self) -> None:
        if not 0 <= self.m_c <= self.total:
            raise ValueError("count must lie in [0, total]")

    @property
    def probability(self) -> Fraction:
        return Fraction(self.m_c, self.total)


@dataclass(frozen=True)
class CoverageReport:
    """Result of checking a family against every key set."""

    covered: int
    uncovered_witness: KeySet | None

    @property
    def is_ideal_family(self) -> bool:
        return self.uncovered_witness is None


def _betas_of(d: Decomposition | Sequence[int]) -> tuple[int, ...]:
    if isinstance(d, Decomposition):
        return d.betas
    return tuple(d)


def count_ideal_sets(d: Decomposition | Sequence[int], n: int, cap: int) -> int:
    """Exact number of n-subsets whose per-fiber intersections all stay <= cap.

    Convolves the capped per-cell polynomials and reads the x^n coefficient.
    """
    betas = _betas_of(d)
    if n < 0 or cap < 0:
        raise ValueError("need n >= 0 and cap >= 0")
    acc = [1]
    for beta in betas:
        top = min(cap, beta, n)
        cell = [binom(beta, l) for l in range(top + 1)]
        limit = min(n, len(acc) + top)
        nxt = [0] * (limit + 1)
        for i, a in enumerate(acc):
            if a == 0:
                continue
            for l, w in enumerate(cell):
                if i + l > limit:
                    break
                nxt[i + l] += a * w
        acc = nxt
    return acc[n] if n < len(acc) else 0


def exact_ideal_probability(p: Params) -> IdealCount:
    """M_c and M_c / C(u,n) for the balanced decomposition of p, cap = floor(c*alpha)."""
    betas = balanced_fiber_sizes(p.u, p.m)
    m_c = count_ideal_sets(betas, p.n, p.load_cap)
    return IdealCount(m_c=m_c, total=binom(p.u, p.n))


def _partitions_desc(total: int, parts: int, bound: int | None = None) -> Iterable[tuple[int, ...]]:
    """Partitions of `total` into exactly `parts` non-negative non-increasing parts."""
    if bound is None:
        bound = total
    if parts == 1:
        if total <= bound:
            yield (total,)
        return
    lo = -(-total // parts)  # first part at least the ceiling of the average
    for first in range(min(total, bound), lo - 1, -1):
        for rest in _partitions_desc(total - first, parts - 1, first):
            yield (first,) + rest


def cap_binds(u: int, m: int, n: int, c: Fraction | int) -> bool:
    """True when the load cap genuinely constrains the balanced decomposition.

    Three degenerate regimes produce ties instead of a unique maximizer:
    m*cap < n (every count is 0), cap >= n (no load can exceed the cap), and
    cap >= ceil(u/m) (every balanced fiber already fits under the cap, so the
    balanced function hashes every set ideally and any all-small-fiber
    decomposition ties with it).
    """
    cap = math.floor(Fraction(c) * Fraction(n, m))
    return m * cap >= n and cap < n and cap < -(-u // m)


def balance_extremality_check(u: int, m: int, n: int, c: Fraction | int) -> bool:
    """Check that the balanced decomposition is exactly the argmax of the ideal count.

    Where the cap binds (see `cap_binds`) the argmax must be the balanced
    decomposition alone; in the degenerate tie regimes the check degrades to
    `balanced is among the argmax`.
    """
    c = Fraction(c)
    cap = math.floor(c * Fraction(n, m))
    balanced = tuple(sorted(balanced_fiber_sizes(u, m), reverse=True))
    counts: dict[tuple[int, ...], int] = {}
    for part in _partitions_desc(u, m):
        counts[part] = count_ideal_sets(part, n, cap)
    best = max(counts.values())
    argmax = {part for part, v in counts.items() if v == best}
    if not cap_binds(u, m, n, c):
        return balanced in argmax
    return argmax == {balanced}


def verify_family(
    f: Family, p: Params, budget: int = DEFAULT_ENUM_BUDGET
) -> CoverageReport:
    """Count the key sets covered by some family member; witness the first miss."""
    total = binom(p.u, p.n)
    if total > budget:
        raise BudgetExceededError(
            f"C({p.u},{p.n}) = {total} exceeds enumeration budget {budget}"
        )
    cap = p.load_cap
    cell_maps = [h.cells for h in f.functions]
    m = p.m
    covered = 0
    witness: KeySet | None = None
    for combo in itertools.combinations(range(1, p.u + 1), p.n):
        hit = False
        for cells in cell_maps:
            loads = [0] * m
            ok = True
            for key in combo:
                cell = cells[key - 1] - 1
                loads[cell] += 1
                if loads[cell] > cap:
                    ok = False
                    break
            if ok:
                hit = True
                break
        if hit:
            covered += 1
        elif witness is None:
            witness = KeySet(combo)
    return CoverageReport(covered=covered, uncovered_witness=witness)


def cover_mask(h: HashFunction, p: Params, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Bitmask over lexicographically ranked key sets that h hashes within cap."""
    total = binom(p.u, p.n)
    if total > budget:
        raise BudgetExceededError(
            f"C({p.u},{p.n}) = {total} exceeds enumeration budget {budget}"
        )
    cap = p.load_cap
    cells = h.cells
    m = p.m
    mask = 0
    for idx, combo in enumerate(itertools.combinations(range(1, p.u + 1), p.n)):
        loads = [0] * m
        ok = True
        for key in combo:
            cell = cells[key - 1] - 1
            loads[cell] += 1
            if loads[cell] > cap:
                ok = False
                break
        if ok:
            mask |= 1 << idx
    return mask


def _cover_dfs(uncovered: int, masks: list[int], slots: int) -> bool:
    if uncovered == 0:
        return True
    if slots == 0:
        return False
    best_gain = 0
    for mk in masks:
        gain = (mk & uncovered).bit_count()
        if gain > best_gain:
            best_gain = gain
    if best_gain == 0 or uncovered.bit_count() > slots * best_gain:
        return False
    lowest = uncovered & -uncovered
    for mk in masks:
        if mk & lowest:
            if _cover_dfs(uncovered & ~mk, masks, slots - 1):
                return True
    return False


def min_family_size_exact(
    p: Params,
    size_limit: int = 8,
    budget: int = DEFAULT_ENUM_BUDGET,
    pool_budget: int = DEFAULT_POOL_BUDGET,
) -> int | None:
    """Smallest family size covering every key set, by exhaustive search.

    Candidates are all functions deduplicated by fiber partition (max load is
    relabeling-invariant), sorted by descending single-function coverage with
    fiber-signature tie-breaks; the search branches on the lowest-ranked
    uncovered set.  Returns None when no family of size <= size_limit exists.
    """
    if p.c >= p.m or p.m == 1:
        return 1
    total = binom(p.u, p.n)
    if total > budget:
        raise BudgetExceededError(
            f"C({p.u},{p.n}) = {total} exceeds enumeration budget {budget}"
        )
    if p.m * p.load_cap < p.n:
        return None  # no function is ideal for any set
    seen: set[tuple[tuple[int, ...], ...]] = set()
    candidates: list[HashFunction] = []
    for h in all_functions(p.u, p.m, budget=max(budget, p.m**p.u)):
        sig = h.partition_signature()
        if sig in seen:
            continue
        seen.add(sig)
        candidates.append(h)
        if len(candidates) > pool_budget:
            raise BudgetExceededError(
                f"candidate pool exceeds budget {pool_budget}"
            )
    scored = sorted(
        (
            (cover_mask(h, p, budget), h.partition_signature())
            for h in candidates
        ),
        key=lambda pair: (-pair[0].bit_count(), pair[1]),
    )
    masks = [mk for mk, _sig in scored if mk]
    full = (1 << total) - 1
    for k in range(1, size_limit + 1):
        if _cover_dfs(full, masks, k):
            return k
    return None
