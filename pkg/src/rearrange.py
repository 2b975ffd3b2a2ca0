"""
Splitting a curve at cuts and regluing the arcs with matching tangent frames.

The rearranged curve r_{sigma,C} concatenates the arcs gamma_{sigma(1)} * ... *
gamma_{sigma(k)}; its end point e_sigma(C) is evaluated either through an
explicit ArcChain or directly with the chord-sum formula in EndpointMap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import List, Sequence, Tuple, Union

import numpy as np

from .curve_kernel import (
    DEFAULT_RESOLUTION,
    TWO_PI,
    QuadratureTable,
    RigidMotion,
    TurningCurve,
    require_normalized,
    total_turning,
    turning_multiple,
)

SPEED_RTOL = 1e-12


@dataclass(frozen=True)
class Perm:
    """Permutation of {1..k} in one-line notation: values[j-1] is the arc placed j-th."""

    values: Tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if sorted(values) != list(range(1, len(values) + 1)):
            raise ValueError(f"{list(values)} is not a permutation of 1..{len(values)}")
        object.__setattr__(self, "values", values)

    @classmethod
    def parse(cls, text: str) -> "Perm":
        """Parse whitespace-separated one-line notation, e.g. "2 5 1 6 4 3"."""
        try:
            values = [int(token) for token in text.split()]
        except ValueError:
            raise ValueError(f"cannot parse permutation from {text!r}") from None
        return cls(tuple(values))

    @classmethod
    def identity(cls, k: int) -> "Perm":
        return cls(tuple(range(1, k + 1)))

    @property
    def k(self) -> int:
        return len(self.values)

    def __call__(self, i: int) -> int:
        return self.values[i - 1]

    def index_of(self, value: int) -> int:
        return self.values.index(value) + 1

    def inverse(self) -> "Perm":
        inv = [0] * self.k
        for position, value in enumerate(self.values, start=1):
            inv[value - 1] = position
        return Perm(tuple(inv))

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.values)


@dataclass(frozen=True)
class Cuts:
    """Nondecreasing cuts (c_1, ..., c_{k-1}) in [0, 1]; c_0 = 0 and c_k = 1 implicitly."""

    values: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("at least one cut is required (k >= 2)")
        bounds = (0.0,) + values + (1.0,)
        for left, right in zip(bounds, bounds[1:]):
            if not left <= right:
                raise ValueError(f"cuts must satisfy 0 <= c_1 <= ... <= c_(k-1) <= 1, got {values}")
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, *values: float) -> "Cuts":
        return cls(tuple(values))

    @property
    def k(self) -> int:
        return len(self.values) + 1

    @property
    def bounds(self) -> Tuple[float, ...]:
        return (0.0,) + self.values + (1.0,)

    def c(self, i: int) -> float:
        return self.bounds[i]

    @property
    def margin(self) -> float:
        """Length of the shortest arc; positive iff the cuts are interior to D_k."""
        bounds = self.bounds
        return min(right - left for left, right in zip(bounds, bounds[1:]))

    def __str__(self) -> str:
        return " ".join(repr(v) for v in self.values)


@dataclass(frozen=True)
class Arc:
    """Piece gamma|[start, end] of a parent curve, with its chord and tangent angles."""

    table: QuadratureTable
    start: float
    end: float
    entry_angle: float
    exit_angle: float
    chord: complex
    index: int = 0

    @classmethod
    def cut(cls, table: QuadratureTable, start: float, end: float, index: int = 0) -> "Arc":
        if not 0.0 <= start <= end <= 1.0:
            raise ValueError(f"arc interval [{start}, {end}] is not inside [0, 1]")
        points = table.position(np.array([start, end]))
        angles = table.theta_at(np.array([start, end]))
        return cls(
            table,
            start,
            end,
            float(angles[0]),
            float(angles[1]),
            complex(points[1] - points[0]),
            index,
        )

    @property
    def length(self) -> float:
        """Parameter length; the geometric length is speed * length."""
        return self.end - self.start

    @property
    def degenerate(self) -> bool:
        return self.end == self.start

    @property
    def speed(self) -> float:
        return self.table.speed

    def local(self, s):
        """Position relative to the arc's start point."""
        return self.table.position(s) - self.table.position(self.start)


@dataclass(frozen=True)
class ArcChain:
    """
    Arcs placed in the plane one after another.

    Each placement maps arc-local points (relative to the arc start) to the
    plane with a rigid motion.
    """

    arcs: Tuple[Arc, ...]
    motions: Tuple[RigidMotion, ...]

    @classmethod
    def of(cls, arc: Arc) -> "ArcChain":
        start = complex(arc.table.position(arc.start))
        return cls((arc,), (RigidMotion(0.0, start),))

    @property
    def speed(self) -> float:
        return self.arcs[0].speed

    @property
    def start(self) -> complex:
        return self.motions[0].shift

    @property
    def endpoint(self) -> complex:
        return complex(self.motions[-1].apply(self.arcs[-1].chord))

    @property
    def entry_angle(self) -> float:
        return self.motions[0].angle + self.arcs[0].entry_angle

    @property
    def exit_angle(self) -> float:
        return self.motions[-1].angle + self.arcs[-1].exit_angle

    @property
    def length(self) -> float:
        return math.fsum(arc.length for arc in self.arcs)

    def total_turning(self) -> float:
        # exits and entries of consecutive parent arcs cancel exactly under fsum
        terms: List[float] = []
        for arc in self.arcs:
            terms.extend((arc.exit_angle, -arc.entry_angle))
        return math.fsum(terms)

    def moved(self, motion: RigidMotion) -> "ArcChain":
        return ArcChain(self.arcs, tuple(m.then(motion) for m in self.motions))

    def normalized(self) -> "ArcChain":
        """Move the chain so it starts at the origin with tangent angle 0."""
        undo_shift = RigidMotion(0.0, -self.start)
        undo_turn = RigidMotion(-self.entry_angle, 0j)
        return self.moved(undo_shift.then(undo_turn))

    def _locate(self, u: np.ndarray):
        offsets = np.cumsum([0.0] + [arc.length for arc in self.arcs])
        which = np.clip(np.searchsorted(offsets, u, side="right") - 1, 0, len(self.arcs) - 1)
        return offsets, which

    def position(self, u):
        """Point at chain parameter u in [0, length]."""
        u = np.asarray(u, dtype=float)
        offsets, which = self._locate(u)
        out = np.zeros(u.shape, dtype=complex)
        for j, (arc, motion) in enumerate(zip(self.arcs, self.motions)):
            mask = which == j
            if np.any(mask):
                s = np.clip(arc.start + (u[mask] - offsets[j]), arc.start, arc.end)
                out[mask] = motion.apply(arc.local(s))
        return out

    def theta(self, u):
        u = np.asarray(u, dtype=float)
        offsets, which = self._locate(u)
        out = np.zeros(u.shape, dtype=float)
        for j, (arc, motion) in enumerate(zip(self.arcs, self.motions)):
            mask = which == j
            if np.any(mask):
                s = np.clip(arc.start + (u[mask] - offsets[j]), arc.start, arc.end)
                out[mask] = motion.angle + arc.table.theta_at(s)
        return out

    def sample(self, count: int) -> np.ndarray:
        return self.position(np.linspace(0.0, self.length, count))

    def to_curve(self, samples: int = DEFAULT_RESOLUTION + 1) -> TurningCurve:
        """Resample the chain's turning angle into a standalone sampled curve."""
        length = self.length
        theta = self.theta(np.linspace(0.0, length, samples))
        theta = theta - theta[0]
        return TurningCurve.from_samples(self.speed * length, theta)


Piece = Union[Arc, ArcChain]


def _as_chain(piece: Piece) -> ArcChain:
    return piece if isinstance(piece, ArcChain) else ArcChain.of(piece)


def split(curve: TurningCurve, cuts: Cuts, resolution: int = DEFAULT_RESOLUTION) -> List[Arc]:
    """
    Split a curve into k arcs over [c_0, c_1], ..., [c_{k-1}, c_k].

    Degenerate arcs are kept: they have zero chord but still carry theta(c_i).
    """
    table = curve.table(resolution)
    bounds = cuts.bounds
    return [
        Arc.cut(table, bounds[i - 1], bounds[i], index=i) for i in range(1, cuts.k + 1)
    ]


def concat(a: Piece, b: Piece) -> ArcChain:
    """
    Rigidly glue b to the end of a, matching tangent directions (operation *).

    b is rotated by a's exit angle minus b's entry angle and translated so its
    start lands on a's end point.
    """
    left, right = _as_chain(a), _as_chain(b)
    if abs(left.speed - right.speed) > SPEED_RTOL * max(left.speed, right.speed):
        raise ValueError(f"cannot concatenate pieces of speed {left.speed} and {right.speed}")
    turn = left.exit_angle - right.entry_angle
    glue = RigidMotion(0.0, -right.start).then(RigidMotion(turn, left.endpoint))
    placed = right.moved(glue)
    return ArcChain(left.arcs + placed.arcs, left.motions + placed.motions)


def _check_dimensions(sigma: Perm, cuts: Cuts) -> None:
    if sigma.k != cuts.k:
        raise ValueError(f"permutation has k={sigma.k} but cuts give k={cuts.k}")


def rearranged(
    curve: TurningCurve,
    sigma: Perm,
    cuts: Cuts,
    resolution: int = DEFAULT_RESOLUTION,
) -> ArcChain:
    """Build r_{sigma,C}, normalized to start at the origin with tangent angle 0."""
    require_normalized(curve)
    _check_dimensions(sigma, cuts)
    arcs = split(curve, cuts, resolution)
    chain = reduce(concat, [arcs[i - 1] for i in sigma.values])
    return chain.normalized()


class EndpointMap:
    """
    Vectorized e_sigma over batches of cuts via the chord-sum formula.

    With alpha_1 = 0 and alpha_{j+1} = alpha_j + theta(c_{sigma(j)}) - theta(c_{sigma(j)-1}),
    e_sigma(C) = sum_j Rot(alpha_j - theta(c_{sigma(j)-1})) (gamma(c_{sigma(j)}) - gamma(c_{sigma(j)-1})).
    """

    def __init__(self, curve: TurningCurve, sigma: Perm, resolution: int = DEFAULT_RESOLUTION):
        require_normalized(curve)
        self.curve = curve
        self.sigma = sigma
        self.table = curve.table(resolution)

    def __call__(self, cuts) -> np.ndarray:
        cuts = np.atleast_2d(np.asarray(cuts, dtype=float))
        if cuts.shape[1] != self.sigma.k - 1:
            raise ValueError(
                f"expected {self.sigma.k - 1} cut values per row, got {cuts.shape[1]}"
            )
        rows = cuts.shape[0]
        bounds = np.hstack([np.zeros((rows, 1)), cuts, np.ones((rows, 1))])
        points = self.table.position(bounds)
        angles = self.table.theta_at(bounds)
        alpha = np.zeros(rows)
        total = np.zeros(rows, dtype=complex)
        for arc in self.sigma.values:
            chord = points[:, arc] - points[:, arc - 1]
            total += np.exp(1j * (alpha - angles[:, arc - 1])) * chord
            alpha = alpha + (angles[:, arc] - angles[:, arc - 1])
        return total

    def at(self, cuts: Cuts) -> np.ndarray:
        _check_dimensions(self.sigma, cuts)
        z = complex(self(np.array(cuts.values))[0])
        return np.array([z.real, z.imag])


def endpoint_map(
    curve: TurningCurve,
    sigma: Perm,
    cuts: Cuts,
    resolution: int = DEFAULT_RESOLUTION,
) -> np.ndarray:
    """e_sigma(C) without materializing the rearranged curve."""
    return EndpointMap(curve, sigma, resolution).at(cuts)


def e3_closed_form(
    curve: TurningCurve,
    t: float,
    resolution: int = DEFAULT_RESOLUTION,
    tol: float = 1e-9,
) -> np.ndarray:
    """Rot(-theta(t)) gamma(1): end point of r_{(0,t)} when the total turning is 2*pi*m."""
    require_normalized(curve)
    if turning_multiple(curve, tol) is None:
        raise ValueError(
            f"total turning {total_turning(curve):.12g} is not a multiple of 2*pi"
        )
    end = curve.table(resolution).endpoint
    z = np.exp(-1j * float(curve.theta_at(t))) * end
    return np.array([z.real, z.imag])


def tangent_mismatch(piece: Union[TurningCurve, Piece]) -> float:
    """Smallest |d| with d = exit angle - entry angle (mod 2*pi)."""
    if isinstance(piece, TurningCurve):
        turning = total_turning(piece)
    else:
        turning = _as_chain(piece).total_turning()
    return abs(math.remainder(turning, TWO_PI))


def as_complex(point: Sequence[float]) -> complex:
    return complex(point[0], point[1])
