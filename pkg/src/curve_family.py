"""
Module for generating seeded test curves for the closure solvers.
"""

import random
from typing import Any, Dict, List, Sequence

import numpy as np

from .curve_kernel import DEFAULT_RESOLUTION, TWO_PI, TurningCurve, endpoint_norm


class CurveFamily:
    """Class for generating random non-closed Fourier curves with a prescribed total turning."""

    # Shapes of the random turning-angle perturbations
    PROFILES = {
        "gentle": {"terms": (1, 2), "amp": (0.2, 0.6), "freq": (1, 2)},
        "wavy": {"terms": (1, 3), "amp": (0.2, 0.9), "freq": (1, 3)},
        "single": {"terms": (1, 1), "amp": (0.5, 0.9), "freq": (2, 2)},
    }

    def __init__(self, seed: int = 42):
        """
        Initialize the curve generator.

        Args:
            seed: Random seed for reproducibility
        """
        self.random = random.Random(seed)

    def fourier_curve(
        self,
        winding: int,
        profile: str = "wavy",
        speed: float = 1.0,
        min_gap: float = 0.05,
        max_attempts: int = 200,
        resolution: int = DEFAULT_RESOLUTION,
    ) -> TurningCurve:
        """
        Draw a normalized Fourier curve with total turning 2*pi*winding.

        Integer frequencies keep the total turning exact. Draws whose end point
        lies closer than min_gap * speed to the start are rejected.

        Args:
            winding: Number of full turns m
            profile: Name of the perturbation profile
            speed: Curve speed c
            min_gap: Smallest accepted |gamma(1)| relative to c
            max_attempts: Number of draws before giving up
            resolution: Quadrature resolution used for the gap check

        Returns:
            A normalized TurningCurve
        """
        if profile not in self.PROFILES:
            raise ValueError(
                f"Unknown profile: {profile}. Available profiles: {list(self.PROFILES.keys())}"
            )
        shape = self.PROFILES[profile]
        for _ in range(max_attempts):
            count = self.random.randint(*shape["terms"])
            terms = [
                (
                    self.random.uniform(*shape["amp"]),
                    float(self.random.randint(*shape["freq"])),
                    self.random.uniform(0.0, TWO_PI),
                )
                for _ in range(count)
            ]
            curve = TurningCurve.from_fourier(speed, winding, terms, anchored=True)
            if endpoint_norm(curve, resolution) >= min_gap * speed:
                return curve
        raise RuntimeError(
            f"no curve with |gamma(1)| >= {min_gap} * c after {max_attempts} draws (m={winding})"
        )

    def generate_dataset(
        self,
        size: int = 10,
        windings: Sequence[int] = (1, 2),
        profile: str = "wavy",
        speed: float = 1.0,
    ) -> List[Dict[str, Any]]:
        """
        Generate a list of test curves cycling through the given windings.

        Returns:
            List of dictionaries with id, winding and curve
        """
        dataset = []
        for i in range(size):
            winding = windings[i % len(windings)]
            dataset.append(
                {
                    "id": i,
                    "winding": winding,
                    "curve": self.fourier_curve(winding, profile=profile, speed=speed),
                }
            )
        return dataset


def tailed_loop(
    extra_turn: float = 0.3,
    loop_fraction: float = 0.4,
    samples: int = DEFAULT_RESOLUTION + 1,
    speed: float = 1.0,
) -> TurningCurve:
    """
    A loop turning by 2*pi + extra_turn over [0, loop_fraction], then a straight tail.

    The turning angle follows a smoothstep ramp, so the curve stays C1.
    """
    if not 0.0 < loop_fraction < 1.0:
        raise ValueError(f"loop_fraction must lie in (0, 1), got {loop_fraction}")
    s = np.linspace(0.0, 1.0, samples)
    u = np.clip(s / loop_fraction, 0.0, 1.0)
    ramp = u * u * (3.0 - 2.0 * u)
    return TurningCurve.from_samples(speed, (TWO_PI + extra_turn) * ramp)


def straight_line(speed: float = 1.0, samples: int = 65) -> TurningCurve:
    return TurningCurve.from_samples(speed, np.zeros(samples))


def circle(turns: int = 1, speed: float = 1.0) -> TurningCurve:
    return TurningCurve.from_fourier(speed, turns)


def wobbly_circle(
    winding: int = 1,
    amp: float = 0.9,
    freq: float = 2.0,
    phase: float = 0.0,
    speed: float = 1.0,
) -> TurningCurve:
    """theta(s) = 2*pi*m*s + amp * sin(2*pi*freq*s + phase), anchored at s = 0."""
    return TurningCurve.from_fourier(speed, winding, [(amp, freq, phase)], anchored=True)

