"""
Constant-speed planar curves stored as turning-angle functions.

A curve is gamma(s) = c * integral_0^s (cos theta(u), sin theta(u)) du on [0, 1].
Positions come from a composite trapezoid prefix table on a uniform grid;
points are handled internally as complex numbers.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 4096
MIN_SAMPLES = 65
TWO_PI = 2.0 * math.pi


class WindingError(ValueError):
    """Raised when a winding number is undefined or cannot be resolved."""


@dataclass(frozen=True)
class FourierTerm:
    amp: float
    freq: float
    phase: float


@dataclass(frozen=True, eq=False)
class SampledTheta:
    """Turning angle given by uniform samples on [0, 1], both endpoints included."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < MIN_SAMPLES:
            raise ValueError(
                f"theta samples need at least {MIN_SAMPLES} values, got {values.size}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("theta samples must be finite")
        jumps = np.abs(np.diff(values))
        if np.any(jumps >= math.pi):
            bad = int(np.argmax(jumps >= math.pi))
            raise ValueError(
                f"theta samples are not a continuous lift: |theta[{bad + 1}] - theta[{bad}]| >= pi"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.values.size)

    def at(self, s):
        return np.interp(s, self.grid, self.values)

    def normalized(self) -> "SampledTheta":
        return SampledTheta(self.values - self.values[0])

    def total_turning(self) -> float:
        return float(self.values[-1] - self.values[0])


@dataclass(frozen=True)
class FourierTheta:
    """
    theta(s) = 2*pi*m*s + sum amp * sin(2*pi*freq*s + phase).

    An anchored series subtracts each term's value at s=0, so theta(0) is exactly 0.
    The phase argument is reduced with (freq * s) mod 1 so integer frequencies
    contribute exactly nothing at s=1.
    """

    winding: int
    terms: Tuple[FourierTerm, ...] = ()
    anchored: bool = False

    def at(self, s):
        s = np.asarray(s, dtype=float)
        theta = TWO_PI * (self.winding * s)
        for term in self.terms:
            wave = np.sin(TWO_PI * np.mod(term.freq * s, 1.0) + term.phase)
            if self.anchored:
                wave = wave - math.sin(term.phase)
            theta = theta + term.amp * wave
        return theta

    def normalized(self) -> "FourierTheta":
        return replace(self, anchored=True)

    def total_turning(self) -> float:
        total = TWO_PI * self.winding
        for term in self.terms:
            end = math.sin(TWO_PI * (term.freq % 1.0) + term.phase)
            total += term.amp * (end - math.sin(term.phase))
        return total


Theta = Union[SampledTheta, FourierTheta]


@dataclass(frozen=True)
class QuadratureTable:
    """Prefix table of gamma on the grid s_i = i / resolution."""

    resolution: int
    speed: float
    theta: Theta
    tangent: np.ndarray
    prefix: np.ndarray

    @classmethod
    def build(cls, speed: float, theta: Theta, resolution: int) -> "QuadratureTable":
        nodes = np.linspace(0.0, 1.0, resolution + 1)
        tangent = np.exp(1j * theta.at(nodes))
        prefix = speed * cumulative_trapezoid(tangent, dx=1.0 / resolution, initial=0)
        tangent.setflags(write=False)
        prefix.setflags(write=False)
        return cls(resolution, speed, theta, tangent, prefix)

    def theta_at(self, s):
        return self.theta.at(s)

    def position(self, s):
        """Complex position(s); off-node values add a trapezoid step from the node below."""
        s = np.asarray(s, dtype=float)
        n = self.resolution
        idx = np.clip(np.floor(s * n), 0, n).astype(int)
        ds = s - idx / n
        step = 0.5 * self.speed * ds * (self.tangent[idx] + np.exp(1j * self.theta.at(s)))
        return self.prefix[idx] + step

    @property
    def endpoint(self) -> complex:
        return complex(self.prefix[-1])


@dataclass(frozen=True)
class TurningCurve:
    """A constant-speed planar C1 curve: speed c and turning angle theta on [0, 1]."""

    speed: float
    theta: Theta
    _tables: Dict[int, QuadratureTable] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self):
        if not (self.speed > 0 and math.isfinite(self.speed)):
            raise ValueError(f"speed must be positive, got {self.speed}")

    @classmethod
    def from_samples(cls, speed: float, values: Sequence[float]) -> "TurningCurve":
        return cls(speed, SampledTheta(np.asarray(values, dtype=float)))

    @classmethod
    def from_fourier(
        cls,
        speed: float,
        winding: int,
        terms: Sequence[Tuple[float, float, float]] = (),
        anchored: bool = False,
    ) -> "TurningCurve":
        fourier_terms = tuple(FourierTerm(*t) for t in terms)
        return cls(speed, FourierTheta(int(winding), fourier_terms, anchored))

    @property
    def normalized(self) -> bool:
        return float(self.theta.at(0.0)) == 0.0

    def table(self, resolution: int = DEFAULT_RESOLUTION) -> QuadratureTable:
        table = self._tables.get(resolution)
        if table is None:
            table = QuadratureTable.build(self.speed, self.theta, resolution)
            self._tables[resolution] = table
        return table

    def theta_at(self, s):
        return self.theta.at(s)


def require_normalized(curve: TurningCurve) -> None:
    if not curve.normalized:
        raise ValueError("curve must be normalized (theta(0) = 0); call normalize() first")


def normalize(curve: TurningCurve) -> TurningCurve:
    """Return the curve with theta(0) = 0; the start point is (0, 0) by construction."""
    if curve.normalized:
        return curve
    return TurningCurve(curve.speed, curve.theta.normalized())


def position(curve: TurningCurve, s: float, resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    """
    Evaluate gamma(s) by composite trapezoid quadrature.

    Args:
        curve: Normalized curve
        s: Parameter in [0, 1]
        resolution: Number of grid intervals

    Returns:
        Point as an array of shape (2,)
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"parameter s must lie in [0, 1], got {s}")
    z = complex(curve.table(resolution).position(s))
    return np.array([z.real, z.imag])


def total_turning(curve: TurningCurve) -> float:
    return curve.theta.total_turning()


def turning_multiple(curve: TurningCurve, tol: float = 1e-9) -> Optional[int]:
    """Return m when the total turning is 2*pi*m within tol, else None."""
    turning = total_turning(curve)
    m = round(turning / TWO_PI)
    if abs(turning - TWO_PI * m) <= tol:
        return int(m)
    return None


def max_radius(curve: TurningCurve, resolution: int = DEFAULT_RESOLUTION) -> float:
    return float(np.max(np.abs(curve.table(resolution).prefix)))


def theta_rate(curve: TurningCurve, resolution: int = DEFAULT_RESOLUTION) -> float:
    """Largest |theta'| seen between grid nodes, in radians per unit parameter."""
    theta = curve.theta_at(np.linspace(0.0, 1.0, resolution + 1))
    return float(np.max(np.abs(np.diff(theta)))) * resolution


def endpoint_norm(curve: TurningCurve, resolution: int = DEFAULT_RESOLUTION) -> float:
    return abs(curve.table(resolution).endpoint)


@dataclass(frozen=True)
class RigidMotion:
    """Orientation-preserving motion z -> exp(i*angle) * z + shift."""

    angle: float = 0.0
    shift: complex = 0j

    def apply(self, z):
        return np.exp(1j * self.angle) * z + self.shift

    def then(self, other: "RigidMotion") -> "RigidMotion":
        """Motion applying self first, then other."""
        return RigidMotion(
            self.angle + other.angle,
            np.exp(1j * other.angle) * self.shift + other.shift,
        )


@dataclass(frozen=True)
class LoopSamples:
    """Closed sampled loop: points of shape (n, 2) with first == last."""

    points: np.ndarray
    params: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 2:
            raise ValueError("loop points must have shape (n, 2) with n >= 2")
        if not np.array_equal(points[0], points[-1]):
            raise ValueError("loop is not closed: first and last points differ")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "params", np.asarray(self.params, dtype=float))

    @classmethod
    def from_complex(cls, z: np.ndarray, params: np.ndarray) -> "LoopSamples":
        z = np.array(z, dtype=complex)
        z[-1] = z[0]
        return cls(np.column_stack([z.real, z.imag]), params)

    def as_complex(self) -> np.ndarray:
        return self.points[:, 0] + 1j * self.points[:, 1]


def angle_steps(loop: LoopSamples, point: Sequence[float]) -> np.ndarray:
    """Signed angle increments of the loop as seen from point."""
    d = loop.as_complex() - complex(point[0], point[1])
    return np.angle(d[1:] / d[:-1])


def winding_number(
    loop: LoopSamples, point: Sequence[float], eps: float = 1e-12, scale: float = 1.0
) -> int:
    """
    Winding number of a sampled loop about a point.

    Sums the signed angle increments and divides by 2*pi. The on-loop threshold
    is eps * scale; pass the curve speed as scale for a relative threshold.

    Raises:
        WindingError: if a sample lies within eps * scale of the point, an angular step
            reaches pi/2, or the sum is not close to an integer multiple of 2*pi
    """
    d = loop.as_complex() - complex(point[0], point[1])
    threshold = eps * scale
    if np.min(np.abs(d)) <= threshold:
        raise WindingError(f"point {tuple(point)} lies on the loop (within {threshold:g})")
    steps = angle_steps(loop, point)
    if np.max(np.abs(steps)) >= math.pi / 2:
        raise WindingError("angular step >= pi/2; resample the loop more densely")
    turns = math.fsum(steps) / TWO_PI
    winding = round(turns)
    if abs(turns - winding) >= 0.1:
        raise WindingError(f"winding sum {turns:.4f} is not close to an integer")
    return int(winding)