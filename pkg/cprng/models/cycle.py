"""
Brent cycle detection on the full state vector sequence.

Two states are equal only when all p components are bitwise equal. Memory
use is constant (two state vectors), so budgets of 10^7 steps and beyond
are cheap.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from cprng.models.tent_map import GeneratorState, apply_step
from cprng.utils.exceptions import NumericalCorruptionError

_NO_CYCLE = -1
_CORRUPT = -2


@njit(cache=True)
def _same(u, v):
    for j in range(u.shape[0]):
        if u[j] != v[j]:
            return False
    return True


@njit(cache=True)
def _brent(x0, a, diag, eps, budget):
    """Returns (tail, cycle, steps); tail < 0 flags no cycle or corruption."""
    p = x0.shape[0]
    f = np.empty(p)
    tortoise = x0.copy()
    hare = x0.copy()
    tortoise_bits = tortoise.view(np.uint64)
    hare_bits = hare.view(np.uint64)

    if budget < 1:
        return _NO_CYCLE, 0, 0
    if not apply_step(hare, a, diag, eps, f):
        return _CORRUPT, 0, 1
    steps = 1
    power = 1
    lam = 1
    while not _same(tortoise_bits, hare_bits):
        if steps >= budget:
            return _NO_CYCLE, 0, steps
        if power == lam:
            tortoise[:] = hare
            power *= 2
            lam = 0
        if not apply_step(hare, a, diag, eps, f):
            return _CORRUPT, 0, steps + 1
        steps += 1
        lam += 1

    # tail: walk both from the start, lam apart
    tortoise[:] = x0
    hare[:] = x0
    for _ in range(lam):
        apply_step(hare, a, diag, eps, f)
    mu = 0
    while not _same(tortoise_bits, hare_bits):
        apply_step(tortoise, a, diag, eps, f)
        apply_step(hare, a, diag, eps, f)
        mu += 1
    return mu, lam, steps


@dataclass(frozen=True)
class CycleReport:
    """Outcome of a cycle search; tail and cycle are None when none was found."""

    found: bool
    tail: Optional[int]
    cycle: Optional[int]
    steps: int
    budget: int


def find_cycle(generator: GeneratorState, budget: int) -> CycleReport:
    """
    Search the orbit of the generator's current state for a cycle.

    The search starts from the current state (no transient is applied) and
    does not move the generator.

    Raises:
        NumericalCorruptionError: If the orbit leaves [-1, 1]
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    a, diag, eps = generator.kernel_params
    tail, cycle, steps = _brent(generator.current.copy(), a, diag, eps, budget)
    if tail == _CORRUPT:
        raise NumericalCorruptionError(f"orbit left [-1, 1] after {steps} steps", step=steps)
    if tail == _NO_CYCLE:
        return CycleReport(found=False, tail=None, cycle=None, steps=steps, budget=budget)
    return CycleReport(found=True, tail=int(tail), cycle=int(cycle), steps=steps, budget=budget)
