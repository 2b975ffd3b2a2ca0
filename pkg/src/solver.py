"""
Closure solvers for rearranged curves.

Every solver works on a two-parameter loop family F(h, t), 0 <= h <= t <= 1:
for fixed h, t -> F(h, t) is a loop based at gamma(1). At h = 0 the loop winds
-m times around the origin when the total turning is 2*pi*m, and at h = 1 it
shrinks to the point gamma(1). A sweep over h finds where the winding changes,
bisection narrows the change down, and damped Newton lands on the zero.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.signal import find_peaks

from .config import RunConfig
from .curve_kernel import (
    DEFAULT_RESOLUTION,
    TWO_PI,
    LoopSamples,
    TurningCurve,
    WindingError,
    endpoint_norm,
    max_radius,
    require_normalized,
    total_turning,
    turning_multiple,
    winding_number,
)
from .perm import (
    ReductionPlan,
    build_reduction_plan,
    cyclic_shift,
    inflate_batch,
    is_cyclic_shift,
    shift_of,
)
from .rearrange import Cuts, EndpointMap, Perm, as_complex, rearranged, tangent_mismatch

logger = logging.getLogger(__name__)

TWO_CUT = Perm((1, 3, 2))
MAX_SEEDS = 4
MAX_BRACKETS = 64
MIN_DAMPING = 2.0**-10
POLISH_POINTS = 21
ORACLE_CHUNK = 200_000
CERTIFICATE_TOL = 1e-6
TRANSFER_TOL = 1e-9
VERIFY_SLACK = 1e-12


class Rejected(ValueError):
    """The closure hypotheses fail: no cuts exist or none are guaranteed."""

    def __init__(self, reason: str, certificate=None):
        super().__init__(reason)
        self.reason = reason
        self.certificate = certificate


class Inconclusive(RuntimeError):
    """Numerical failure under valid hypotheses; a solution exists but was not found."""


@dataclass(frozen=True)
class SolveResult:
    sigma: Perm
    cuts: Cuts
    residual: float
    tangent_mismatch: float
    margin: float
    iterations: int
    method: str
    degenerate: bool = False
    target: complex = 0j
    working: Optional[Perm] = None
    transfer_gap: float = 0.0

    @property
    def k(self) -> int:
        return self.sigma.k


@dataclass(frozen=True)
class LoopWinding:
    """Winding of one loop t -> F(h, t) about the target, with closest approaches."""

    h: float
    winding: Optional[int]
    min_distance: float
    closest_t: float
    samples: int
    seeds: Tuple[float, ...]

    @property
    def crossed(self) -> bool:
        return self.winding is None


@dataclass(frozen=True)
class WindingProfile:
    h: np.ndarray
    winding: Tuple[Optional[int], ...]
    min_distance: np.ndarray
    closest_t: np.ndarray
    target: complex = 0j

    @classmethod
    def from_loops(cls, loops: Sequence[LoopWinding], target: complex = 0j) -> "WindingProfile":
        return cls(
            np.array([loop.h for loop in loops]),
            tuple(loop.winding for loop in loops),
            np.array([loop.min_distance for loop in loops]),
            np.array([loop.closest_t for loop in loops]),
            target,
        )

    @property
    def crossed(self) -> np.ndarray:
        return np.array([w is None for w in self.winding])

    def changes(self) -> List[int]:
        """Indices i where the winding differs between h[i] and h[i+1] or a loop crossed."""
        return [
            i
            for i in range(len(self.winding) - 1)
            if self.winding[i] is None
            or self.winding[i + 1] is None
            or self.winding[i] != self.winding[i + 1]
        ]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "h": self.h,
                "winding": pd.array(self.winding, dtype="Int64"),
                "crossed": self.crossed,
                "min_distance": self.min_distance,
                "closest_t": self.closest_t,
            }
        )


@dataclass(frozen=True)
class C0Condition:
    holds: bool
    lhs: float
    rhs: float
    turning: float


@dataclass(frozen=True)
class ZkCertificate:
    """Spread of |e_{z_h}(C)| over random cuts; constant at |gamma(1)| for cyclic shifts."""

    sigma: Perm
    endpoint_norm: float
    min_norm: float
    max_norm: float
    samples: int
    holds: bool
    degenerate: bool

    @property
    def spread(self) -> float:
        return self.max_norm - self.min_norm


@dataclass(frozen=True)
class OracleResult:
    sigma: Perm
    cuts: Cuts
    residual: float
    evaluations: int
    domain: str


def _pair_cuts(h: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.column_stack([h, t])


class LoopFamily:
    """
    End points F(h, t) = e_sigma(cuts(h, t)) of a two-parameter family of cuts.

    The two-cut family uses sigma = [1, 3, 2] with cuts (h, t); the inflated
    family uses a reduction plan's working permutation with cuts I[h, t].
    """

    def __init__(
        self,
        curve: TurningCurve,
        sigma: Perm,
        to_cuts: Callable[[np.ndarray, np.ndarray], np.ndarray],
        resolution: int = DEFAULT_RESOLUTION,
        name: str = "",
    ):
        self.curve = curve
        self.sigma = sigma
        self.endpoints = EndpointMap(curve, sigma, resolution)
        self.resolution = resolution
        self.name = name or str(sigma)
        self._to_cuts = to_cuts

    @classmethod
    def two_cut(cls, curve: TurningCurve, resolution: int = DEFAULT_RESOLUTION) -> "LoopFamily":
        return cls(curve, TWO_CUT, _pair_cuts, resolution, "two-cut")

    @classmethod
    def inflated(
        cls, curve: TurningCurve, plan: ReductionPlan, resolution: int = DEFAULT_RESOLUTION
    ) -> "LoopFamily":
        return cls(
            curve, plan.working, partial(inflate_batch, plan), resolution, f"inflated[{plan.working}]"
        )

    def cut_rows(self, h, t) -> np.ndarray:
        h, t = np.broadcast_arrays(np.asarray(h, dtype=float), np.asarray(t, dtype=float))
        return self._to_cuts(h.ravel(), t.ravel())

    def __call__(self, h, t) -> np.ndarray:
        shape = np.broadcast(np.asarray(h), np.asarray(t)).shape
        return self.endpoints(self.cut_rows(h, t)).reshape(shape)

    def cuts(self, h: float, t: float) -> Cuts:
        return Cuts(tuple(self.cut_rows(h, t)[0]))


def _seed_ts(t: np.ndarray, distance: np.ndarray) -> Tuple[float, ...]:
    """Parameters of the closest approaches along a loop, nearest first."""
    peaks, _ = find_peaks(-distance)
    order = sorted(set(peaks.tolist()) | {int(np.argmin(distance))}, key=lambda i: distance[i])
    return tuple(float(t[i]) for i in order[:MAX_SEEDS])


def _loop_winding(family: LoopFamily, h: float, target: complex, config: RunConfig) -> LoopWinding:
    """
    Winding of t -> F(h, t) about target.

    Segments whose angular step reaches pi/2 are halved until none is left or
    the sample cap is hit; an unresolved or touching loop counts as crossed.
    """
    u = np.linspace(0.0, 1.0, config.loop_samples)
    while True:
        t = h + (1.0 - h) * u
        z = family(h, t) - target
        with np.errstate(divide="ignore", invalid="ignore"):
            steps = np.abs(np.angle(z[1:] / z[:-1]))
        bad = ~(steps < math.pi / 2)
        if not bad.any() or u.size + int(bad.sum()) > config.loop_samples_cap:
            break
        u = np.sort(np.concatenate([u, 0.5 * (u[:-1][bad] + u[1:][bad])]))

    distance = np.abs(z)
    closest = int(np.argmin(distance))
    winding = None
    if not bad.any():
        try:
            winding = winding_number(
                LoopSamples.from_complex(z, t),
                (0.0, 0.0),
                eps=config.on_loop_eps,
                scale=family.curve.speed,
            )
        except WindingError as e:
            logger.debug("loop at h=%.9g unresolved: %s", h, e)
    else:
        logger.debug("loop at h=%.9g still unresolved at %d samples", h, u.size)
    return LoopWinding(
        h, winding, float(distance[closest]), float(t[closest]), int(u.size), _seed_ts(t, distance)
    )


def _sweep(family: LoopFamily, target: complex, config: RunConfig) -> List[LoopWinding]:
    hs = np.linspace(0.0, 1.0, config.h_grid + 1)
    run = partial(_loop_winding, family, target=target, config=config)
    if config.threads == 1:
        return [run(float(h)) for h in hs]
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        return list(pool.map(run, [float(h) for h in hs]))


def _bisect(
    family: LoopFamily,
    target: complex,
    lo: LoopWinding,
    hi: LoopWinding,
    config: RunConfig,
) -> Iterator[Tuple[LoopWinding, int]]:
    """
    Narrow a winding change down to width bisect_width, lower h first.

    Both ends of every bracket keep differing windings; a midpoint differing
    from both ends splits the bracket in two.
    """
    stack = [(lo, hi, 0)]
    opened = 1
    while stack:
        lo, hi, steps = stack.pop()
        center = 0.5 * (lo.h + hi.h)
        mid = _loop_winding(family, center, target, config)
        if hi.h - lo.h <= config.bisect_width or mid.crossed:
            yield mid, steps + 1
            continue
        halves = []
        if mid.winding != lo.winding:
            halves.append((lo, mid, steps + 1))
        if mid.winding != hi.winding:
            halves.append((mid, hi, steps + 1))
        if len(halves) == 2:
            if opened >= MAX_BRACKETS:
                logger.warning("bracket limit %d reached; dropping the upper half at h=%.9g", MAX_BRACKETS, center)
                halves = halves[:1]
            else:
                opened += 1
        stack.extend(reversed(halves))


def _candidates(
    family: LoopFamily,
    target: complex,
    sweep: Sequence[LoopWinding],
    config: RunConfig,
) -> Iterator[Tuple[LoopWinding, int]]:
    """Loops next to the zeros of F - target: crossed samples and bisected brackets by h, then near misses."""
    resolved = [loop for loop in sweep if not loop.crossed]
    work = [(loop.h, loop, None) for loop in sweep if loop.crossed]
    work += [
        (lo.h, lo, hi) for lo, hi in zip(resolved, resolved[1:]) if lo.winding != hi.winding
    ]
    work.sort(key=lambda item: item[0])
    logger.debug(
        "%s: %d crossed samples, %d brackets",
        family.name,
        sum(hi is None for _, _, hi in work),
        sum(hi is not None for _, _, hi in work),
    )
    for _, lo, hi in work:
        if hi is None:
            yield lo, 0
        else:
            yield from _bisect(family, target, lo, hi, config)

    threshold = config.near_miss * family.curve.speed
    for loop in sweep:
        if not loop.crossed and loop.min_distance < threshold:
            yield loop, 0


def finite_difference_jacobian(
    fn: Callable[[np.ndarray], np.ndarray],
    x: Sequence[float],
    step: float = 1e-6,
    central: bool = False,
    upper: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """
    Jacobian of fn at x by forward (or central) differences.

    Args:
        fn: Map from R^n to R^m
        x: Evaluation point
        step: Difference step
        central: Use central differences instead of forward ones
        upper: Per-coordinate upper bounds; a forward step that would cross
            one is taken backward instead

    Returns:
        Array of shape (m, n)
    """
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(fn(x), dtype=float)
    jac = np.empty((f0.size, x.size))
    for j in range(x.size):
        e = np.zeros_like(x)
        if central:
            e[j] = step
            jac[:, j] = (np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2.0 * step)
            continue
        delta = step if upper is None or x[j] + step <= upper[j] else -step
        e[j] = delta
        jac[:, j] = (np.asarray(fn(x + e), dtype=float) - f0) / delta
    return jac


def _project(x: np.ndarray) -> np.ndarray:
    h = min(max(float(x[0]), 0.0), 1.0)
    t = min(max(float(x[1]), h), 1.0)
    return np.array([h, t])


def _as_pair(z: complex) -> np.ndarray:
    return np.array([z.real, z.imag])


@dataclass(frozen=True)
class _Root:
    h: float
    t: float
    residual: float
    iterations: int
    method: str


def _damped_newton(
    family: LoopFamily,
    target: complex,
    x0: Sequence[float],
    tol: float,
    config: RunConfig,
) -> Tuple[np.ndarray, float, int, bool]:
    def gap(x: np.ndarray) -> complex:
        return complex(family(x[0], x[1])) - target

    x = _project(np.asarray(x0, dtype=float))
    r = gap(x)
    norm = abs(r)
    for it in range(config.newton_max_iter):
        if norm <= tol:
            return x, norm, it, True
        jac = finite_difference_jacobian(
            lambda y: _as_pair(gap(y)), x, config.fd_step, upper=(x[1], 1.0)
        )
        try:
            step = np.linalg.solve(jac, -_as_pair(r))
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -_as_pair(r), rcond=None)[0]
        damping = 1.0
        while damping >= MIN_DAMPING:
            trial = _project(x + damping * step)
            trial_r = gap(trial)
            if abs(trial_r) < norm:
                x, r, norm = trial, trial_r, abs(trial_r)
                break
            damping *= 0.5
        else:
            return x, norm, it + 1, False
    return x, norm, config.newton_max_iter, norm <= tol


def _grid_polish(
    family: LoopFamily,
    target: complex,
    x0: np.ndarray,
    radius: float,
    tol: float,
) -> Tuple[np.ndarray, float, int]:
    """Shrinking local grid search around x0; each round recentres on the best node."""
    best = _project(x0)
    norm = abs(complex(family(best[0], best[1])) - target)
    offsets = np.linspace(-1.0, 1.0, POLISH_POINTS)
    rounds = 0
    while norm > tol and radius > 1e-15:
        rounds += 1
        hh, tt = np.meshgrid(best[0] + radius * offsets, best[1] + radius * offsets, indexing="ij")
        hh = np.clip(hh, 0.0, 1.0)
        tt = np.clip(tt, hh, 1.0)
        values = np.abs(family(hh, tt) - target)
        idx = np.unravel_index(np.argmin(values), values.shape)
        if values[idx] < norm:
            best, norm = np.array([hh[idx], tt[idx]]), float(values[idx])
        radius *= 0.25
    return best, norm, rounds


def _refine(
    family: LoopFamily,
    target: complex,
    loop: LoopWinding,
    steps: int,
    tol: float,
    config: RunConfig,
) -> Iterator[_Root]:
    for rank, t0 in enumerate(loop.seeds):
        x, norm, its, ok = _damped_newton(family, target, (loop.h, t0), tol, config)
        if ok:
            yield _Root(x[0], x[1], norm, steps + its, "bisection" if its == 0 else "newton")
            continue
        logger.debug("Newton stalled at (%.9g, %.9g), residual %.3g", x[0], x[1], norm)
        if rank > 0:
            continue
        logger.warning(
            "Newton stalled near h=%.9g (residual %.3g); falling back to grid polish", loop.h, norm
        )
        radius = max(config.bisect_width, 1.0 / config.h_grid)
        x, norm, rounds = _grid_polish(family, target, x, radius, tol)
        if norm <= tol:
            yield _Root(x[0], x[1], norm, steps + its + rounds, "grid")


def _search(
    family: LoopFamily,
    target: complex,
    tol: float,
    config: RunConfig,
    finish: Callable[[_Root], Optional[SolveResult]],
    find_all: bool = False,
) -> List[SolveResult]:
    sweep = _sweep(family, target, config)
    results: List[SolveResult] = []
    roots: List[_Root] = []
    for loop, steps in _candidates(family, target, sweep, config):
        for root in _refine(family, target, loop, steps, tol, config):
            if any(math.hypot(root.h - r.h, root.t - r.t) < config.dedupe for r in roots):
                continue
            result = finish(root)
            if result is None:
                continue
            roots.append(root)
            results.append(result)
            logger.debug("%s: root at (%.9g, %.9g) via %s", family.name, root.h, root.t, root.method)
            if not find_all:
                return results
    return results


def _verified(
    curve: TurningCurve,
    sigma: Perm,
    cuts: Cuts,
    target: complex,
    residual: float,
    resolution: int,
) -> Optional[float]:
    """Residual of the materialized rearranged curve, or None if it disagrees with the fast map."""
    chain = rearranged(curve, sigma, cuts, resolution)
    check = abs(chain.endpoint - target)
    if check > 2.0 * residual + VERIFY_SLACK * curve.speed:
        logger.warning(
            "discarding cuts %s: rearranged residual %.3g exceeds 2 x %.3g", cuts, check, residual
        )
        return None
    return tangent_mismatch(chain)


def _require_turning_multiple(curve: TurningCurve, config: RunConfig) -> int:
    require_normalized(curve)
    m = turning_multiple(curve, config.turning_tol)
    if not m:
        raise Rejected(
            f"hypothesis fails: total turning {total_turning(curve):.12g} is not a nonzero multiple of 2*pi"
        )
    return m


def _is_closed(curve: TurningCurve, config: RunConfig) -> bool:
    return endpoint_norm(curve, config.resolution) <= config.closed_tol * curve.speed


def _trivial(curve: TurningCurve, sigma: Perm, target: complex, config: RunConfig, degenerate: bool) -> SolveResult:
    cuts = Cuts((0.0,) * (sigma.k - 1))
    chain = rearranged(curve, sigma, cuts, config.resolution)
    return SolveResult(
        sigma,
        cuts,
        abs(chain.endpoint - target),
        tangent_mismatch(chain),
        cuts.margin,
        0,
        "trivial",
        degenerate=degenerate,
        target=target,
    )


def _two_cut_finisher(
    curve: TurningCurve, family: LoopFamily, target: complex, config: RunConfig
) -> Callable[[_Root], Optional[SolveResult]]:
    def finish(root: _Root) -> Optional[SolveResult]:
        cuts = Cuts.of(root.h, root.t)
        mismatch = _verified(curve, TWO_CUT, cuts, target, root.residual, config.resolution)
        if mismatch is None:
            return None
        return SolveResult(
            TWO_CUT, cuts, root.residual, mismatch, cuts.margin, root.iterations, root.method, target=target
        )

    return finish


def solve_two_cut(curve: TurningCurve, config: Optional[RunConfig] = None) -> SolveResult:
    """
    Find cuts (h, t) closing gamma_1 * gamma_3 * gamma_2 into a C1 curve.

    Raises:
        Rejected: if the total turning is not a nonzero multiple of 2*pi
        Inconclusive: if no bracket converges
    """
    return solve_two_cut_to_target(curve, (0.0, 0.0), config)


def solve_two_cut_to_target(
    curve: TurningCurve, target: Sequence[float], config: Optional[RunConfig] = None
) -> SolveResult:
    """Find (h, t) with e(h, t) = target for any target the boundary loop winds around."""
    config = config or RunConfig()
    _require_turning_multiple(curve, config)
    point = as_complex(target)
    end = curve.table(config.resolution).endpoint
    if abs(end - point) <= config.closed_tol * curve.speed:
        degenerate = point == 0
        logger.info("target coincides with gamma(1); returning trivial cuts")
        return _trivial(curve, TWO_CUT, point, config, degenerate)

    family = LoopFamily.two_cut(curve, config.resolution)
    boundary = _loop_winding(family, 0.0, point, config)
    if boundary.winding == 0:
        raise Rejected(f"target {tuple(target)} has winding number 0 for the boundary loop")
    tol = config.residual_tol * curve.speed
    results = _search(family, point, tol, config, _two_cut_finisher(curve, family, point, config))
    if not results:
        raise Inconclusive(
            f"no converged two-cut solution for target {tuple(target)}; try a finer h_grid or resolution"
        )
    return results[0]


def find_all_two_cut(curve: TurningCurve, config: Optional[RunConfig] = None) -> List[SolveResult]:
    """One solution per winding change of the h sweep, separated by at least config.dedupe in (h, t)."""
    config = config or RunConfig()
    _require_turning_multiple(curve, config)
    if _is_closed(curve, config):
        return [_trivial(curve, TWO_CUT, 0j, config, True)]
    family = LoopFamily.two_cut(curve, config.resolution)
    tol = config.residual_tol * curve.speed
    results = _search(
        family, 0j, tol, config, _two_cut_finisher(curve, family, 0j, config), find_all=True
    )
    if not results:
        raise Inconclusive("no converged two-cut solution")
    return sorted(results, key=lambda r: r.cuts.values)


def check_c0_condition(curve: TurningCurve, config: Optional[RunConfig] = None) -> C0Condition:
    """
    |gamma(1)| >= sqrt(2 (1 - cos theta(1))) max |gamma(s)| and |theta(1) - theta(0)| >= 2*pi.

    sqrt(2 (1 - cos x)) is evaluated as 2 |sin(x / 2)|, and taken as 0 when the
    total turning is a multiple of 2*pi.
    """
    config = config or RunConfig()
    require_normalized(curve)
    turning = total_turning(curve)
    lhs = endpoint_norm(curve, config.resolution)
    if turning_multiple(curve, config.turning_tol) is not None:
        factor = 0.0
    else:
        factor = 2.0 * abs(math.sin(0.5 * turning))
    rhs = factor * max_radius(curve, config.resolution)
    holds = lhs >= rhs and abs(turning) >= TWO_PI - config.turning_tol
    return C0Condition(holds, lhs, rhs, turning)


def solve_c0(curve: TurningCurve, config: Optional[RunConfig] = None) -> SolveResult:
    """Close the curve with two cuts, allowing a corner at the closing point."""
    config = config or RunConfig()
    condition = check_c0_condition(curve, config)
    if not condition.holds:
        raise Rejected(
            f"C0 condition fails: |gamma(1)| = {condition.lhs:.6g}, bound = {condition.rhs:.6g}, "
            f"total turning = {condition.turning:.6g}",
            certificate=condition,
        )
    if _is_closed(curve, config):
        return _trivial(curve, TWO_CUT, 0j, config, True)
    family = LoopFamily.two_cut(curve, config.resolution)
    tol = config.residual_tol * curve.speed
    results = _search(family, 0j, tol, config, _two_cut_finisher(curve, family, 0j, config))
    if not results:
        raise Inconclusive("no converged C0 closure")
    return results[0]


def certify_zk_nonclosure(
    curve: TurningCurve,
    k: int,
    h: int,
    grid_n: int = 10_000,
    seed: int = 0,
    resolution: int = DEFAULT_RESOLUTION,
    tol: float = CERTIFICATE_TOL,
) -> ZkCertificate:
    """
    Evaluate |e_{z_h}(C)| on grid_n random cuts; for a cyclic shift it never moves off |gamma(1)|.
    """
    require_normalized(curve)
    sigma = cyclic_shift(k, h)
    rng = np.random.default_rng(seed)
    cuts = np.sort(rng.random((grid_n, k - 1)), axis=1)
    norms = np.abs(EndpointMap(curve, sigma, resolution)(cuts))
    end = endpoint_norm(curve, resolution)
    lo, hi = float(norms.min()), float(norms.max())
    slack = tol * curve.speed
    return ZkCertificate(
        sigma,
        end,
        lo,
        hi,
        grid_n,
        holds=(hi - lo <= slack and lo >= end - slack),
        degenerate=end <= 1e-9 * curve.speed,
    )


def solve_k(curve: TurningCurve, sigma: Perm, config: Optional[RunConfig] = None) -> SolveResult:
    """
    Find interior cuts closing r_{sigma,C}, for any sigma outside Z_k.

    Solves on the inflated family of the reduction plan and checks the result
    under both the working permutation and sigma itself.
    """
    config = config or RunConfig()
    require_normalized(curve)
    if is_cyclic_shift(sigma):
        certificate = None
        m = turning_multiple(curve, config.turning_tol)
        if m and not _is_closed(curve, config):
            certificate = certify_zk_nonclosure(
                curve, sigma.k, shift_of(sigma), config.certificate_grid, config.seed, config.resolution
            )
        raise Rejected(
            f"{sigma} is a cyclic shift: |e(C)| = |gamma(1)| for every choice of cuts",
            certificate=certificate,
        )
    _require_turning_multiple(curve, config)
    if _is_closed(curve, config):
        raise Rejected("curve is already closed; proper k-arc closure needs a non-closed input")

    plan = build_reduction_plan(sigma)
    family = LoopFamily.inflated(curve, plan, config.resolution)
    tol = config.k_residual_tol * curve.speed
    original = EndpointMap(curve, sigma, config.resolution)
    c = curve.speed

    def finish(root: _Root) -> Optional[SolveResult]:
        cuts = family.cuts(root.h, root.t)
        if cuts.margin <= 0:
            logger.debug("discarding improper cuts %s", cuts)
            return None
        residual = float(abs(complex(original(np.array(cuts.values))[0])))
        gap = abs(residual - root.residual)
        if gap > TRANSFER_TOL * c:
            logger.warning("closure gap moved by %.3g between %s and %s", gap, plan.working, sigma)
        if residual > tol:
            return None
        mismatch = _verified(curve, sigma, cuts, 0j, residual, config.resolution)
        if mismatch is None:
            return None
        return SolveResult(
            sigma,
            cuts,
            residual,
            mismatch,
            cuts.margin,
            root.iterations,
            root.method,
            working=plan.working,
            transfer_gap=gap,
        )

    logger.debug("solving %s through %s route, chain %s", sigma, plan.route, plan.chain_label())
    results = _search(family, 0j, tol, config, finish)
    if not results:
        raise Inconclusive(f"no converged interior cuts for {sigma}")
    return results[0]


def loop_winding_profile(
    curve: TurningCurve,
    h_count: Optional[int] = None,
    config: Optional[RunConfig] = None,
    target: Sequence[float] = (0.0, 0.0),
) -> WindingProfile:
    """Winding of every loop t -> e(h, t) of the two-cut family about target, over h_count + 1 values of h."""
    config = config or RunConfig()
    require_normalized(curve)
    if h_count is not None:
        config = config.with_overrides(h_grid=h_count)
    family = LoopFamily.two_cut(curve, config.resolution)
    point = as_complex(target)
    return WindingProfile.from_loops(_sweep(family, point, config), point)


def _simplex_rows(points: int, dims: int) -> Iterator[np.ndarray]:
    """All nondecreasing grid vectors of the given dimension, in lexicographic order."""
    grid = np.linspace(0.0, 1.0, points)
    if dims == 1:
        yield grid[:, None]
        return
    i, j = np.triu_indices(points)
    if dims == 2:
        yield np.column_stack([grid[i], grid[j]])
        return
    for a in range(points):
        keep = i >= a
        yield np.column_stack([np.full(int(keep.sum()), grid[a]), grid[i[keep]], grid[j[keep]]])


def _chunks(rows: Iterator[np.ndarray]) -> Iterator[np.ndarray]:
    for block in rows:
        for start in range(0, block.shape[0], ORACLE_CHUNK):
            yield block[start : start + ORACLE_CHUNK]


def oracle_grid(
    curve: TurningCurve,
    sigma: Perm,
    resolution: int = 500,
    budget: int = 20_000_000,
    quadrature: int = DEFAULT_RESOLUTION,
) -> OracleResult:
    """
    Brute-force argmin of |e_sigma(C)| over a grid.

    For k <= 4 the grid covers D_k with resolution + 1 values per axis; for
    larger k it covers D_3 mapped through the inflation of sigma's reduction plan.

    Raises:
        ValueError: if the number of grid points exceeds budget
    """
    require_normalized(curve)
    k = sigma.k
    points = resolution + 1
    dims = k - 1 if k <= 4 else 2
    count = math.comb(points + dims - 1, dims)
    if count > budget:
        raise ValueError(f"oracle grid needs {count} evaluations, over the budget of {budget}")

    endpoints = EndpointMap(curve, sigma, quadrature)
    if k <= 4:
        domain = f"D{k}"
        blocks = _chunks(_simplex_rows(points, dims))
    else:
        plan = build_reduction_plan(sigma)
        domain = "inflated D3"
        blocks = (
            inflate_batch(plan, block[:, 0], block[:, 1])
            for block in _chunks(_simplex_rows(points, 2))
        )

    best_cuts, best = None, math.inf
    for block in blocks:
        norms = np.abs(endpoints(block))
        idx = int(np.argmin(norms))
        if norms[idx] < best:
            best, best_cuts = float(norms[idx]), block[idx]
    logger.debug("oracle %s over %s: %d points, best %.3g", sigma, domain, count, best)
    return OracleResult(sigma, Cuts(tuple(best_cuts)), best, count, domain)
