"""Monte Carlo behavior beyond exact enumeration: max-load means, ideality
probability estimates, and the adversarial single-fiber key set.

RNG contract: numpy PCG64 seeded through SeedSequence(seed, spawn_key=(worker,)),
so every (seed, workers) pair reproduces bit-identically on any platform.
Trials partition across workers; results merge by count-weighted pooling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hashspace import HashFunction, KeySet, Params, blocked_function


@dataclass(frozen=True)
class Estimate:
    """Sample mean with a 95% interval half-width and replay metadata."""

    mean: float
    ci95_halfwidth: float
    trials: int
    seed: int
    workers: int = 1
    method: str = "normal"


def _worker_rng(seed: int, worker: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(worker,))))


def _split_trials(trials: int, workers: int) -> list[int]:
    base, extra = divmod(trials, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def estimate_max_load(
    n: int, m: int, trials: int, seed: int, workers: int = 1
) -> Estimate:
    """Mean maximum cell load of n uniform throws into m cells."""
    if trials < 1:
        raise ValueError("need trials >= 1")
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if m == 1:
        return Estimate(float(n), 0.0, trials, seed, workers)
    maxima = []
    for w, share in enumerate(_split_trials(trials, workers)):
        if share == 0:
            continue
        rng = _worker_rng(seed, w)
        batch = 1 + (2**22 // max(1, n))  # cap scratch memory around 32 MB
        done = 0
        while done < share:
            b = min(batch, share - done)
            throws = rng.integers(0, m, size=(b, n))
            flat = throws + (np.arange(b) * m)[:, None]
            counts = np.bincount(flat.ravel(), minlength=b * m).reshape(b, m)
            maxima.append(counts.max(axis=1))
            done += b
    values = np.concatenate(maxima).astype(np.float64)
    mean = float(values.mean())
    std = float(values.std(ddof=1)) if trials > 1 else 0.0
    return Estimate(mean, 1.96 * std / math.sqrt(trials), trials, seed, workers)


def _floyd_sample(rng: np.random.Generator, u: int, n: int) -> set[int]:
    """Floyd's uniform sampling of n distinct keys from 1..u."""
    chosen: set[int] = set()
    for j in range(u - n + 1, u + 1):
        pick = int(rng.integers(1, j + 1))
        chosen.add(j if pick in chosen else pick)
    return chosen


def estimate_ideal_probability(
    p: Params, trials: int, seed: int, workers: int = 1
) -> Estimate:
    """Fraction of uniform n-subsets the blocked balanced function hashes within cap.

    Interval: normal approximation, switching to Wilson when successes < 10
    (estimates near zero are exactly the ones compared against tail bounds).
    """
    if trials < 1:
        raise ValueError("need trials >= 1")
    h = blocked_function(p)
    cell_of = h.cells
    cap = p.load_cap
    m = p.m
    successes = 0
    for w, share in enumerate(_split_trials(trials, workers)):
        if share == 0:
            continue
        rng = _worker_rng(seed, w)
        for _ in range(share):
            loads = [0] * m
            ok = True
            for key in _floyd_sample(rng, p.u, p.n):
                cell = cell_of[key - 1] - 1
                loads[cell] += 1
                if loads[cell] > cap:
                    ok = False
                    break
            if ok:
                successes += 1
    p_hat = successes / trials
    if successes < 10:
        halfwidth, method = _wilson_halfwidth(successes, trials), "wilson"
    else:
        halfwidth = 1.96 * math.sqrt(p_hat * (1.0 - p_hat) / trials)
        method = "normal"
    return Estimate(p_hat, halfwidth, trials, seed, workers, method)


def _wilson_halfwidth(successes: int, trials: int, z: float = 1.96) -> float:
    p_hat = successes / trials
    denom = 1.0 + z * z / trials
    spread = (
        z
        * math.sqrt(p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials * trials))
        / denom
    )
    return spread


def adversarial_set(h: HashFunction, n: int) -> KeySet:
    """n keys from the largest fiber of h (lowest cell index on ties).

    Every key lands in one cell, so the resulting max load is exactly n.
    Raises when no fiber holds n keys (cannot happen once u >= n*m).
    """
    fibers = h.fibers()
    sizes = [len(f) for f in fibers]
    best_cell = max(range(h.m), key=lambda i: (sizes[i], -i))
    if sizes[best_cell] < n:
        raise ValueError(
            f"largest fiber holds {sizes[best_cell]} keys; need {n}"
        )
    return KeySet(tuple(fibers[best_cell][:n]))
