"""
Permutation combinatorics for arc rearrangements.

Covers the cyclic-shift subgroup Z_k, the relabeling maps F_i induced when an
arc collapses, the reduction of a non-cyclic permutation down to S_3, and the
inflation of collapsed cuts back into proper ones.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .rearrange import Cuts, Perm

logger = logging.getLogger(__name__)

SWAP_LAST_TWO = Perm((1, 3, 2))


class CyclicShiftError(ValueError):
    """Raised when an operation needs a permutation outside Z_k."""


def is_cyclic_shift(sigma: Perm) -> bool:
    k = sigma.k
    return all((sigma(i + 1) - sigma(i)) % k == 1 % k for i in range(1, k))


def cyclic_shift(k: int, h: int) -> Perm:
    """z_h in one-line notation: [h+1, ..., k, 1, ..., h]."""
    if not 0 <= h < k:
        raise ValueError(f"shift h must satisfy 0 <= h < {k}, got {h}")
    return Perm(tuple((i + h - 1) % k + 1 for i in range(1, k + 1)))


def compose(sigma2: Perm, sigma1: Perm) -> Perm:
    """sigma2 . sigma1, i.e. x -> sigma2(sigma1(x))."""
    if sigma2.k != sigma1.k:
        raise ValueError(f"cannot compose permutations of sizes {sigma2.k} and {sigma1.k}")
    return Perm(tuple(sigma2(sigma1(x)) for x in range(1, sigma1.k + 1)))


def is_transposition(sigma: Perm) -> bool:
    moved = [i for i in range(1, sigma.k + 1) if sigma(i) != i]
    return len(moved) == 2


def admits_proper_closure(sigma: Perm) -> bool:
    """
    Whether a non-closed curve with total turning 2*pi*m (m != 0) can be
    closed by some proper cuts under sigma: exactly when sigma is no cyclic shift.
    """
    return sigma.k >= 3 and not is_cyclic_shift(sigma)


def standardize(values: Sequence[int]) -> Perm:
    """Relabel distinct integers to 1..n keeping their relative order."""
    ranks = {v: r for r, v in enumerate(sorted(values), start=1)}
    return Perm(tuple(ranks[v] for v in values))


def contract(sigma: Perm, i: int) -> Perm:
    """
    F_i: drop the arc at rearranged position i and relabel the rest to 1..k-1.

    F_i(sigma)(j) = sigma(j) or sigma(j) - 1 for j < i, and
    sigma(j+1) or sigma(j+1) - 1 for j >= i, decrementing values above sigma(i).
    """
    k = sigma.k
    if k < 2:
        raise ValueError("contract needs k >= 2")
    if not 1 <= i <= k:
        raise ValueError(f"index i must satisfy 1 <= i <= {k}, got {i}")
    return standardize(sigma.values[: i - 1] + sigma.values[i:])


def choose_reduction_index(sigma: Perm) -> int:
    """
    Pick i with F_i(sigma) outside Z_{k-1} and still fixing 1.

    With r the smallest index moved by sigma: r > 2 gives i = 1; r = 2 and
    sigma(2) != k gives i = sigma^{-1}(k); r = 2 and sigma(2) = k gives i = 3.
    """
    k = sigma.k
    if k < 4 or sigma(1) != 1 or is_cyclic_shift(sigma):
        raise ValueError(
            f"choose_reduction_index needs k >= 4, sigma(1) = 1 and sigma outside Z_k; got {sigma}"
        )
    r = next(i for i in range(1, k + 1) if sigma(i) != i)
    if r > 2:
        return 1
    if sigma(2) != k:
        return sigma.index_of(k)
    return 3


def find_pattern_132(sigma: Perm) -> Optional[Tuple[int, int, int]]:
    """
    Positions p1 < p2 < p3 with sigma(p1) < sigma(p3) < sigma(p2), or None.

    Scans p1 ascending, p2 by decreasing value, and takes the p3 with the
    smallest admissible value.
    """
    k = sigma.k
    for p1 in range(1, k - 1):
        low = sigma(p1)
        for p2 in sorted(range(p1 + 1, k), key=lambda p: -sigma(p)):
            high = sigma(p2)
            if high <= low:
                break
            candidates = [p for p in range(p2 + 1, k + 1) if low < sigma(p) < high]
            if candidates:
                return p1, p2, min(candidates, key=sigma)
    return None


@dataclass(frozen=True)
class ReductionStep:
    index: int
    arc: int
    before: Perm

    @property
    def label(self) -> str:
        return f"F{self.index}"


@dataclass(frozen=True)
class ReductionPlan:
    """
    Chain of contractions taking sigma (after a cyclic pre-shift z_shift) to
    the S_3 permutation [1, 3, 2], with the surviving original arcs.
    """

    sigma: Perm
    shift: int
    working: Perm
    steps: Tuple[ReductionStep, ...]
    survivors: Tuple[int, int, int]
    induced: Perm
    route: str

    @property
    def k(self) -> int:
        return self.sigma.k

    @property
    def q(self) -> Tuple[int, int, int]:
        return tuple(a - 1 for a in self.survivors)

    @property
    def collapsed(self) -> Tuple[int, ...]:
        return tuple(step.arc for step in self.steps)

    @property
    def chain_indices(self) -> Tuple[int, ...]:
        """Indices as written in F_a . F_b . ..., where the rightmost applies first."""
        return tuple(step.index for step in reversed(self.steps))

    def chain_label(self) -> str:
        return "·".join(f"F{i}" for i in self.chain_indices)


def _pattern_route(sigma: Perm, positions: Tuple[int, int, int]) -> Tuple[List[ReductionStep], Perm]:
    steps = []
    current = sigma
    for position in sorted(set(range(1, sigma.k + 1)) - set(positions), reverse=True):
        steps.append(ReductionStep(position, sigma(position), current))
        current = contract(current, position)
    return steps, current


def _shifted_route(working: Perm) -> Tuple[List[ReductionStep], Perm]:
    steps = []
    current = working
    arcs = list(working.values)
    while current.k > 3:
        i = choose_reduction_index(current)
        steps.append(ReductionStep(i, arcs.pop(i - 1), current))
        current = contract(current, i)
    return steps, current


def build_reduction_plan(sigma: Perm) -> ReductionPlan:
    """
    Reduce sigma outside Z_k to [1, 3, 2] in S_3 by collapsing arcs.

    If sigma already contains a 132 pattern the other positions are collapsed
    directly, largest position first. Otherwise sigma is pre-shifted by the
    cyclic shift making it fix 1, and the index rule of choose_reduction_index
    drives the chain.
    """
    if sigma.k < 3:
        raise ValueError(f"reduction needs k >= 3, got k={sigma.k}")
    if is_cyclic_shift(sigma):
        raise CyclicShiftError(f"{sigma} is a cyclic shift; no cuts can close the curve")

    positions = find_pattern_132(sigma)
    if positions is not None:
        shift, working, route = 0, sigma, "pattern"
        steps, induced = _pattern_route(sigma, positions)
    else:
        shift = sigma.index_of(1) - 1
        working = compose(sigma, cyclic_shift(sigma.k, shift))
        route = "shifted"
        steps, induced = _shifted_route(working)

    if induced != SWAP_LAST_TWO:
        raise RuntimeError(f"reduction of {sigma} ended at {induced}, expected {SWAP_LAST_TWO}")
    collapsed = {step.arc for step in steps}
    survivors = tuple(sorted(set(working.values) - collapsed))
    plan = ReductionPlan(sigma, shift, working, tuple(steps), survivors, induced, route)
    logger.debug(
        "reduced %s via %s route: chain %s, survivors %s", sigma, route, plan.chain_label(), survivors
    )
    return plan


def inflation_delta(k: int, l1, l2):
    return np.minimum(np.minimum(l1, l2 - l1), 1.0 - l2) / (k - 2)


def inflate_batch(plan: ReductionPlan, l1, l2) -> np.ndarray:
    """
    Inflated cuts I[l1, l2] for arrays of (l1, l2) in D_3, shape (n, k-1).

    Collapsed arcs get width delta = min(l1, l2 - l1, 1 - l2) / (k - 2); on the
    boundary of D_3 delta is 0 and the collapsed configuration is reproduced.
    """
    k = plan.k
    q1, q2, q3 = plan.q
    l1 = np.atleast_1d(np.asarray(l1, dtype=float))
    l2 = np.atleast_1d(np.asarray(l2, dtype=float))
    delta = inflation_delta(k, l1, l2)[:, None]
    j = np.arange(1, k)[None, :]
    cuts = np.where(
        j <= q1,
        j * delta,
        np.where(
            j <= q2,
            l1[:, None] + (j - (q1 + 1)) * delta,
            np.where(j <= q3, l2[:, None] + (j - (q2 + 1)) * delta, 1.0 - (k - j) * delta),
        ),
    )
    # rounding can break monotonicity by an ulp where two branches meet
    return np.clip(np.maximum.accumulate(cuts, axis=1), 0.0, 1.0)


def inflate(plan: ReductionPlan, l1: float, l2: float) -> Cuts:
    if not 0.0 <= l1 <= l2 <= 1.0:
        raise ValueError(f"(l1, l2) = ({l1}, {l2}) is outside D_3")
    return Cuts(tuple(inflate_batch(plan, l1, l2)[0]))


def boundary_cuts(plan: ReductionPlan, t: float) -> Cuts:
    """Collapsed cuts on the boundary of D_k whose end point traces the two-arc circle."""
    return inflate(plan, 0.0, t)


def cyclic_shifts(k: int) -> List[Perm]:
    return [cyclic_shift(k, h) for h in range(k)]


def shift_of(sigma: Perm) -> Optional[int]:
    """h with sigma = z_h, or None when sigma is no cyclic shift."""
    if not is_cyclic_shift(sigma):
        return None
    return sigma(1) - 1
