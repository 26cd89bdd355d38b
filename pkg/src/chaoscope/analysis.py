"""Qualitative-dynamics instruments.

Equilibrium checks, the linear-stability trichotomy, graphical-iteration
(cobweb) traces, bifurcation-diagram scans, and a divergence-rate probe that
quantifies sensitive dependence on initial conditions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DomainError, NonFiniteState, SeparationUnderflow
from .integrate import FieldFn, IntegratorConfig, Trajectory, as_state, integrate
from .systems import LogisticParams, LorenzParams, logistic_step

#: Number of uniform sample times the divergence probe projects both twin
#: trajectories onto (nearest accepted step endpoint wins).
DIVERGENCE_GRID_POINTS = 2000

#: Fraction of the reference attractor diameter beyond which separation is
#: considered saturated and excluded from the exponential fit.
SATURATION_FRACTION = 0.01


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    BIFURCATION = "bifurcation"


def classify_linear(a: float) -> Stability:
    """Strict sign trichotomy for x' = a*x: decay, growth, or the a=0 boundary."""
    if not math.isfinite(a):
        raise DomainError("a must be finite")
    if a < 0.0:
        return Stability.STABLE
    if a > 0.0:
        return Stability.UNSTABLE
    return Stability.BIFURCATION


def verify_equilibrium(
    field: Callable[[np.ndarray], np.ndarray], point, tol: float
) -> bool:
    """True when the max-norm of field(point) is at most tol."""
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    value = np.asarray(field(as_state(point)), dtype=np.float64)
    return bool(np.max(np.abs(value)) <= tol)


def lorenz_equilibria(p: LorenzParams) -> list[np.ndarray]:
    """All equilibria of the Lorenz field: the origin, plus C+- when r > 1."""
    points = [np.zeros(3)]
    if p.r > 1.0:
        w = math.sqrt(p.b * (p.r - 1.0))
        points.append(np.array([w, w, p.r - 1.0]))
        points.append(np.array([-w, -w, p.r - 1.0]))
    return points


@dataclass(frozen=True)
class CobwebTrace:
    """Staircase polyline between a 1-D map's graph and the diagonal.

    ``vertices`` starts at (x0, 0), then alternates vertical moves onto the
    curve with horizontal moves onto the diagonal.  ``curve_samples`` holds
    (x, f(x)) pairs for plotting the graph; the diagonal y = x is implied.
    """

    vertices: np.ndarray
    curve_samples: np.ndarray


def cobweb_trace(p: LogisticParams, x0: float, n: int, curve_points: int = 512) -> CobwebTrace:
    """Graphical iteration of the logistic map: 2n staircase vertices after (x0, 0)."""
    if not (0.0 <= x0 <= 1.0):
        raise DomainError(f"x0 must lie in [0, 1], got {x0}")
    if n < 1:
        raise DomainError("n must be a positive integer")
    verts = np.empty((2 * n + 1, 2), dtype=np.float64)
    verts[0] = (x0, 0.0)
    x = x0
    for k in range(n):
        nxt = logistic_step(p, x)
        verts[2 * k + 1] = (x, nxt)
        verts[2 * k + 2] = (nxt, nxt)
        x = nxt
    xs = np.linspace(0.0, 1.0, max(curve_points, 256))
    curve = np.column_stack([xs, p.mu * xs * (1.0 - xs)])
    return CobwebTrace(vertices=verts, curve_samples=curve)


@dataclass(frozen=True)
class BifurcationDiagram:
    """Post-transient samples of a 1-D family across a parameter sweep."""

    points: np.ndarray  # (N, 2) rows of (parameter, x)
    param_range: Tuple[float, float]
    samples_per_param: int
    discard: int


def bifurcation_scan(
    family: Callable[[float, float], float],
    p_lo: float,
    p_hi: float,
    p_steps: int,
    x0: float,
    discard: int,
    keep: int,
) -> BifurcationDiagram:
    """Sweep `family(param, x)` over p_steps parameters, keeping post-transient iterates.

    discard must be at least 100 so transients have died before sampling.
    """
    if not p_lo < p_hi:
        raise DomainError("need p_lo < p_hi")
    if p_steps < 1:
        raise DomainError("p_steps must be positive")
    if discard < 100:
        raise DomainError("discard must be at least 100")
    if keep < 1:
        raise DomainError("keep must be positive")
    params = np.linspace(p_lo, p_hi, p_steps)
    rows = np.empty((p_steps * keep, 2), dtype=np.float64)
    row = 0
    for param in params:
        x = x0
        for i in range(discard):
            x = family(param, x)
            if not math.isfinite(x):
                raise NonFiniteState(
                    f"orbit diverged at parameter {param!r}, iterate {i + 1}",
                    index=i + 1,
                )
        for i in range(keep):
            rows[row] = (param, x)
            row += 1
            x = family(param, x)
            if not math.isfinite(x):
                raise NonFiniteState(
                    f"orbit diverged at parameter {param!r}, iterate {discard + i + 1}",
                    index=discard + i + 1,
                )
    return BifurcationDiagram(
        points=rows,
        param_range=(p_lo, p_hi),
        samples_per_param=keep,
        discard=discard,
    )


@dataclass(frozen=True)
class DivergenceReport:
    """Twin-trajectory separation history and its fitted exponential rate."""

    times: np.ndarray
    log_separation: np.ndarray
    fitted_rate: float
    fit_window: Tuple[float, float]


def _nearest_states(traj: Trajectory, grid: np.ndarray) -> np.ndarray:
    """State at the accepted step endpoint nearest to each grid time."""
    idx = np.searchsorted(traj.times, grid)
    idx = np.clip(idx, 1, len(traj.times) - 1)
    left = traj.times[idx - 1]
    right = traj.times[idx]
    pick = np.where(grid - left <= right - grid, idx - 1, idx)
    return traj.states[pick]


def divergence_rate(
    field: FieldFn,
    x0,
    delta0: float,
    t1: float,
    config: Optional[IntegratorConfig] = None,
) -> DivergenceReport:
    """Measure the exponential separation rate of twin trajectories.

    Integrates from x0 and from x0 perturbed by delta0 along the first
    coordinate, samples both on a shared uniform grid (nearest accepted
    step endpoint), and fits log separation against time by least squares.
    The fit window is the prefix before separation saturates at
    SATURATION_FRACTION of the reference attractor's coordinate diameter;
    if that prefix is degenerate the full grid is used.
    """
    if not delta0 > 0.0:
        raise DomainError("delta0 must be positive")
    if not t1 > 0.0:
        raise DomainError("t1 must be positive")
    base = as_state(x0)
    perturbed = base.copy()
    perturbed[0] += delta0
    if np.array_equal(base, perturbed):
        raise SeparationUnderflow("delta0 vanished under addition; twins coincide")

    ref = integrate(field, base, 0.0, t1, config)
    twin = integrate(field, perturbed, 0.0, t1, config)

    grid = np.linspace(0.0, t1, DIVERGENCE_GRID_POINTS)
    sep = np.linalg.norm(_nearest_states(ref, grid) - _nearest_states(twin, grid), axis=1)
    with np.errstate(divide="ignore"):
        log_sep = np.log(sep)

    diameter = float(np.max(np.ptp(ref.states, axis=0)))
    threshold = SATURATION_FRACTION * diameter
    below = sep <= threshold
    cut = int(np.argmin(below)) if not below.all() else len(grid)
    if cut < 2:
        cut = len(grid)  # degenerate geometry (e.g. a fixed point): fit everything
    if np.any(sep[:cut] == 0.0):
        raise SeparationUnderflow("twin trajectories coincide bit-exactly")

    slope = float(np.polyfit(grid[:cut], log_sep[:cut], 1)[0])
    return DivergenceReport(
        times=grid,
        log_separation=log_sep,
        fitted_rate=slope,
        fit_window=(float(grid[0]), float(grid[cut - 1])),
    )
