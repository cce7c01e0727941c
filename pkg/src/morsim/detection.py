"""Measured quantities: coincidences, projections, fringes, visibility,
number-difference variance and the minimum detectable rotation angle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .fock import (
    A_MODES,
    KetState,
    Mode,
    Occupation,
    normally_ordered_moment,
    projection_probability,
)
from .medium import Geometry, MediumSpec, apply_mor
from .sources import (
    SourceKind,
    SourceSpec,
    build_state,
    coherent_intensity_pair,
    collinear_state,
    noncollinear_state,
)

TWO_PI = 2.0 * math.pi


class ObservableKind(str, Enum):
    INTENSITY = "intensity"
    TWO_PHOTON_COINCIDENCE = "two_photon_coincidence"
    FOUR_PHOTON_GLAUBER = "four_photon_glauber"
    FOUR_PHOTON_PROJECTION = "four_photon_projection"
    ND_VARIANCE = "nd_variance"


@dataclass(frozen=True)
class ObservableSpec:
    """Which detector quantity to compute.

    ``mode`` selects the mode for intensities, ``pair`` the detector pair for
    coincidence/variance kinds, ``target`` the Fock occupation (total photon
    number 4) for projection probabilities.
    """

    kind: ObservableKind
    mode: Mode | None = None
    pair: tuple[Mode, Mode] = A_MODES
    target: Occupation | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ObservableKind(self.kind))
        m1, m2 = self.pair
        if m1 == m2:
            raise ValueError("observable pair must use two distinct modes")
        if self.kind is ObservableKind.INTENSITY and self.mode is None:
            raise ValueError("intensity observable needs a mode")
        if self.kind is ObservableKind.FOUR_PHOTON_PROJECTION:
            if self.target is None:
                raise ValueError("projection observable needs a target occupation")
            target = tuple(int(n) for n in self.target)
            if len(target) != 4 or any(n < 0 for n in target):
                raise ValueError(f"invalid projection target {self.target}")
            if sum(target) != 4:
                raise ValueError("projection target must contain 4 photons total")
            object.__setattr__(self, "target", target)


@dataclass(frozen=True)
class FringeSeries:
    """Observable values over a strictly increasing theta grid."""

    theta_grid: tuple
    values: tuple
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        grid = tuple(float(t) for t in self.theta_grid)
        vals = tuple(float(v) for v in self.values)
        if not grid:
            raise ValueError("theta grid must be nonempty")
        if len(grid) != len(vals):
            raise ValueError("grid and values must have equal length")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("theta grid must be strictly increasing")
        object.__setattr__(self, "theta_grid", grid)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class VisibilityResult:
    v: float
    theta_at_max: float
    theta_at_min: float


def _measure(state: KetState, obs: ObservableSpec) -> float:
    if obs.kind is ObservableKind.INTENSITY:
        powers = [0, 0, 0, 0]
        powers[obs.mode] = 1
        return normally_ordered_moment(state, powers)
    if obs.kind is ObservableKind.TWO_PHOTON_COINCIDENCE:
        powers = [0, 0, 0, 0]
        powers[obs.pair[0]] = powers[obs.pair[1]] = 1
        return normally_ordered_moment(state, powers)
    if obs.kind is ObservableKind.FOUR_PHOTON_GLAUBER:
        powers = [0, 0, 0, 0]
        powers[obs.pair[0]] = powers[obs.pair[1]] = 2
        return normally_ordered_moment(state, powers)
    if obs.kind is ObservableKind.FOUR_PHOTON_PROJECTION:
        return projection_probability(state, obs.target)
    # number-difference variance over the pair
    m1, m2 = obs.pair
    e1 = 0.0
    e2 = 0.0
    for occ, amp in state.amplitudes.items():
        p = amp.real * amp.real + amp.imag * amp.imag
        d = occ[m2] - occ[m1]
        e1 += p * d
        e2 += p * d * d
    return e2 - e1 * e1


def _restrict_to_sector(state: KetState, n_a: int, n_b: int) -> KetState:
    # exact for projections: the channel conserves photon number per spatial pair
    amps = {occ: amp for occ, amp in state.amplitudes.items()
            if occ[0] + occ[1] == n_a and occ[2] + occ[3] == n_b}
    return KetState(amplitudes=amps, truncation_tail=0.0)


def _prepare_state(source: SourceSpec, obs: ObservableSpec) -> KetState:
    if obs.kind is ObservableKind.FOUR_PHOTON_PROJECTION:
        n_a = obs.target[0] + obs.target[1]
        n_b = obs.target[2] + obs.target[3]
        # only the matching (n_a, n_b) sector contributes to the projection
        # amplitude, so a shallow exact truncation suffices at any r
        if source.n_max is None:
            depth = max(n_a, n_b, (n_a + n_b) // 2, 1)
            if source.kind is SourceKind.COLLINEAR_PDC:
                state = collinear_state(source.r, source.phi, depth)
            else:
                state = noncollinear_state(source.r, depth)
        else:
            state = build_state(source)
        return _restrict_to_sector(state, n_a, n_b)
    return build_state(source)


def _coherent_value(source: SourceSpec, theta: float, obs: ObservableSpec) -> float:
    alpha_sq = abs(source.alpha) ** 2
    if obs.kind is ObservableKind.INTENSITY:
        if obs.mode not in A_MODES:
            raise ValueError("coherent light occupies the a beam only")
        ix, iy = coherent_intensity_pair(source.alpha, theta)
        return ix if obs.mode is Mode.AH else iy
    if obs.kind is ObservableKind.ND_VARIANCE:
        if set(obs.pair) != set(A_MODES):
            raise ValueError("coherent variance is defined on the aH/aV pair")
        return alpha_sq * math.sin(theta) ** 2
    raise ValueError(f"coherent sources support intensity and nd_variance only, "
                     f"not {obs.kind.value}")


def evaluate(source: SourceSpec, medium: MediumSpec, geometry, obs: ObservableSpec) -> float:
    """One observable value for a source evolved through the medium.

    Coherent sources are evaluated in closed form.  PDC sources use the
    truncated Fock state: moments carry the source's documented truncation
    error, projections are exact because only one photon-number sector
    contributes.
    """
    geometry = Geometry(geometry)
    if source.kind is SourceKind.COHERENT:
        if geometry is not Geometry.COLLINEAR:
            raise ValueError("coherent sources use the collinear geometry")
        return _coherent_value(source, medium.theta, obs)
    state = _prepare_state(source, obs)
    return _measure(apply_mor(state, medium, geometry), obs)


def fringe_scan(source: SourceSpec, thetas, geometry, obs: ObservableSpec,
                theta_plus: float = 0.0) -> FringeSeries:
    """Evaluate an observable over a theta grid; pointwise equal to evaluate()."""
    geometry = Geometry(geometry)
    thetas = [float(t) for t in thetas]
    meta = {"source": source, "observable": obs, "geometry": geometry,
            "theta_plus": theta_plus}
    if source.kind is SourceKind.COHERENT:
        if geometry is not Geometry.COLLINEAR:
            raise ValueError("coherent sources use the collinear geometry")
        values = [_coherent_value(source, t, obs) for t in thetas]
        return FringeSeries(theta_grid=tuple(thetas), values=tuple(values), meta=meta)
    state = _prepare_state(source, obs)
    values = [
        _measure(apply_mor(state, MediumSpec(theta=t, theta_plus=theta_plus), geometry), obs)
        for t in thetas
    ]
    return FringeSeries(theta_grid=tuple(thetas), values=tuple(values), meta=meta)


def visibility(series: FringeSeries) -> VisibilityResult:
    """(max - min) / (max + min) over the series; the grid must cover at
    least one full period of the observable."""
    values = series.values
    vmax, vmin = max(values), min(values)
    if vmax + vmin == 0.0:
        raise ValueError("visibility undefined: fringe is identically zero")
    return VisibilityResult(
        v=(vmax - vmin) / (vmax + vmin),
        theta_at_max=series.theta_grid[values.index(vmax)],
        theta_at_min=series.theta_grid[values.index(vmin)],
    )


def nd_variance(source: SourceSpec, medium: MediumSpec, geometry) -> float:
    """Variance of the photon-number difference between the aV and aH outputs."""
    obs = ObservableSpec(kind=ObservableKind.ND_VARIANCE, pair=A_MODES)
    return evaluate(source, medium, geometry, obs)


def min_detectable_angle(source: SourceSpec) -> float:
    """Smallest theta > 0 with unit number-difference fluctuation.

    Coherent: arcsin(1/|alpha|).  Collinear PDC: arcsin(1/sinh 2r).  Requires
    a mean photon number above one.
    """
    n_mean = _mean_n(source)
    if n_mean <= 1.0:
        raise ValueError("no solution: the number-difference fluctuation never "
                         f"reaches 1 for mean photon number {n_mean:g} <= 1")
    if source.kind is SourceKind.COHERENT:
        return math.asin(1.0 / abs(source.alpha))
    return math.asin(1.0 / math.sinh(2.0 * source.r))


def min_detectable_angle_error_propagation(source: SourceSpec) -> float:
    """Alternate estimator Delta(N_d) / |d<N_d>/d theta|.

    For coherent light this is the theta-independent shot-noise value
    1/|alpha|.  For collinear PDC the mean number difference does not depend
    on theta at all (both output intensities equal sinh^2 r), so the
    estimator carries no signal and the result is infinite.
    """
    if source.kind is SourceKind.COHERENT:
        if abs(source.alpha) == 0:
            raise ValueError("coherent amplitude must be nonzero")
        return 1.0 / abs(source.alpha)
    if source.kind is SourceKind.COLLINEAR_PDC:
        return math.inf
    raise ValueError("error-propagation estimator is defined for coherent and "
                     "collinear PDC sources")


def _mean_n(source: SourceSpec) -> float:
    if source.kind is SourceKind.COHERENT:
        return abs(source.alpha) ** 2
    if source.kind is SourceKind.COLLINEAR_PDC:
        return 2.0 * math.sinh(source.r) ** 2
    raise ValueError("minimum detectable angle is defined for coherent and "
                     "collinear PDC sources")


def fringe_period(source: SourceSpec, obs: ObservableSpec, geometry) -> float:
    """Period in theta of the named observable (a valid period, not always
    the fundamental one for constant fringes)."""
    geometry = Geometry(geometry)
    if obs.kind is ObservableKind.INTENSITY:
        return TWO_PI if source.kind is SourceKind.COHERENT else math.pi
    if obs.kind is ObservableKind.FOUR_PHOTON_PROJECTION:
        if obs.target == (1, 1, 1, 1) and geometry is Geometry.NONCOLLINEAR:
            return math.pi / 2.0
        if obs.target in ((2, 2, 0, 0), (0, 0, 2, 2)):
            return math.pi
        return TWO_PI
    return math.pi


def dominant_frequency(series: FringeSeries) -> int:
    """Dominant integer frequency (cycles per 2 pi) of a fringe sampled on a
    uniform grid spanning exactly one 2 pi window, endpoint excluded."""
    grid = np.asarray(series.theta_grid)
    if len(grid) < 8:
        raise ValueError("need at least 8 samples for frequency extraction")
    steps = np.diff(grid)
    step = steps[0]
    if np.max(np.abs(steps - step)) > 1e-9:
        raise ValueError("frequency extraction needs a uniform theta grid")
    span = grid[-1] - grid[0] + step
    if abs(span - TWO_PI) > 1e-8:
        raise ValueError("frequency extraction needs a grid spanning one 2*pi window")
    spectrum = np.abs(np.fft.rfft(np.asarray(series.values)))
    if len(spectrum) < 2:
        raise ValueError("grid too coarse for frequency extraction")
    return int(np.argmax(spectrum[1:]) + 1)
