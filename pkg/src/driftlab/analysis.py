"""Estimators and bound-vs-experiment comparisons.

Everything here consumes either recorded trajectories (drift and step-tail
estimation) or stopping-time samples (summaries, tail comparisons,
histograms).  Censored samples are handled conservatively throughout: they
are excluded from means, counted as exceeding every survival threshold,
and reported separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from driftlab.bounds import BoundSpec, tail_probability_upper
from driftlab.errors import EmptySampleError
from driftlab.trajectory import HittingTimeSample, Trajectory

DEFAULT_CONFIDENCE = 0.999


def hoeffding_margin(n: int, confidence: float = DEFAULT_CONFIDENCE) -> float:
    """One-sided allowance sqrt(ln(1/(1-confidence)) / (2n)).

    An empirical frequency from n independent runs exceeds its true
    probability by more than this with probability at most 1 - confidence.
    """
    if n <= 0:
        raise EmptySampleError("margin needs at least one sample")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence!r}")
    return math.sqrt(math.log(1.0 / (1.0 - confidence)) / (2.0 * n))


# ---------------------------------------------------------------------------
# Drift estimation from trajectories.


@dataclass
class DriftEstimate:
    """Moment estimates over all pre-stopping transitions.

    mean_drift and second_moment average X_{t+1} - X_t and its square over
    every recorded consecutive pair; per_state_mean buckets the same means
    by floor(X_t) of the departing state.
    """

    mean_drift: float
    second_moment: float
    transitions: int
    per_state_mean: dict[int, float] = field(default_factory=dict)


def estimate_drift(trajectories: Iterable[Trajectory]) -> DriftEstimate:
    total = 0.0
    total_sq = 0.0
    count = 0
    by_state_sum: dict[int, float] = {}
    by_state_n: dict[int, int] = {}
    for traj in trajectories:
        vals = traj.values
        for t in range(len(vals) - 1):
            d = vals[t + 1] - vals[t]
            total += d
            total_sq += d * d
            count += 1
            s = math.floor(vals[t])
            by_state_sum[s] = by_state_sum.get(s, 0.0) + d
            by_state_n[s] = by_state_n.get(s, 0) + 1
    if count == 0:
        raise EmptySampleError("no transitions recorded; cannot estimate drift")
    per_state = {s: by_state_sum[s] / by_state_n[s] for s in sorted(by_state_sum)}
    return DriftEstimate(
        mean_drift=total / count,
        second_moment=total_sq / count,
        transitions=count,
        per_state_mean=per_state,
    )


def classify_drift(
    est: DriftEstimate, n: int, c: float, delta_hat: float, tol: float
) -> str:
    """Label an estimate against the two hypothesis regimes.

    "variance_dominated": drift nonnegative up to tol and second moment at
    least delta_hat.  "variance_transformed": drift negative but no worse
    than -c/n - tol, same second-moment floor.  Anything else: "neither".
    """
    if est.second_moment >= delta_hat:
        if est.mean_drift >= -tol:
            return "variance_dominated"
        if est.mean_drift >= -(c / n) - tol:
            return "variance_transformed"
    return "neither"


# ---------------------------------------------------------------------------
# Step-size tail fitting: find (r, eta) with
# freq(|step| >= j) <= r / (1 + eta)^j for all j >= 0, minimizing the
# induced range constant r / ln(1 + eta).


@dataclass
class StepTailFit:
    r: float
    eta: float
    max_violation: float
    range_constant: float  # r / ln(1 + eta)


DEFAULT_ETA_GRID = tuple(i / 20.0 for i in range(1, 61))  # 0.05 .. 3.00


def fit_step_tail(
    trajectories: Iterable[Trajectory], eta_grid: Sequence[float] = DEFAULT_ETA_GRID
) -> StepTailFit:
    """Fit the geometric step-tail envelope over a grid of decay rates.

    For each eta the smallest feasible r is max over observed magnitudes m
    of freq(|step| >= m) * (1 + eta)^m (the envelope is tight at some
    observed magnitude; between magnitudes the empirical tail is flat while
    the envelope falls, so checking observed m suffices).  freq(>= 0) = 1
    forces r >= 1.  The winner minimizes r / ln(1 + eta).
    """
    if not eta_grid or any(e <= 0 for e in eta_grid):
        raise ValueError("eta_grid must be nonempty with positive entries")
    magnitudes: list[float] = []
    for traj in trajectories:
        vals = traj.values
        magnitudes.extend(abs(vals[t + 1] - vals[t]) for t in range(len(vals) - 1))
    if not magnitudes:
        raise EmptySampleError("no transitions recorded; cannot fit step tail")
    n = len(magnitudes)
    magnitudes.sort()
    # distinct magnitudes with exceedance counts: freq(|step| >= m)
    points: list[tuple[float, float]] = [(0.0, 1.0)]
    i = 0
    while i < n:
        m = magnitudes[i]
        if m > 0:
            points.append((m, (n - i) / n))
        j = i
        while j < n and magnitudes[j] == m:
            j += 1
        i = j

    best: StepTailFit | None = None
    for eta in eta_grid:
        growth = 1.0 + eta
        r = max(freq * growth**m for m, freq in points)
        rc = r / math.log(growth)
        if best is None or rc < best.range_constant:
            viol = max(freq - r / growth**m for m, freq in points)
            best = StepTailFit(r=r, eta=eta, max_violation=viol, range_constant=rc)
    return best


# ---------------------------------------------------------------------------
# Tail comparison against a closed-form bound.


@dataclass
class TailPoint:
    tau: float
    empirical_survival: float
    hoeffding_upper: float  # bound + margin: the largest admissible frequency
    theoretical_bound: float
    violated: bool


@dataclass
class TailReport:
    confidence: float
    margin: float
    sample_count: int
    grid: list[TailPoint]

    @property
    def violated(self) -> bool:
        return any(p.violated for p in self.grid)


def compare_bound(
    samples: Sequence[HittingTimeSample],
    spec: BoundSpec,
    tau_grid: Sequence[float],
    confidence: float = DEFAULT_CONFIDENCE,
) -> TailReport:
    """Empirical survival vs. theoretical tail on a grid of thresholds.

    Survival counts runs with stopping time >= tau; censored runs count as
    exceeding every threshold (their true time is at least the cap, and
    overcounting survival can only make the check harder to pass).  A point
    is violated when the empirical frequency exceeds bound + margin.
    """
    if not samples:
        raise EmptySampleError("tail comparison needs at least one sample")
    if not tau_grid:
        raise ValueError("tau_grid must be nonempty")
    n = len(samples)
    margin = hoeffding_margin(n, confidence)
    grid = []
    for tau in tau_grid:
        exceed = sum(1 for s in samples if s.censored or s.stopping_time >= tau)
        emp = exceed / n
        bound = tail_probability_upper(spec, tau)
        grid.append(
            TailPoint(
                tau=float(tau),
                empirical_survival=emp,
                hoeffding_upper=bound + margin,
                theoretical_bound=bound,
                violated=emp > bound + margin,
            )
        )
    return TailReport(confidence=confidence, margin=margin, sample_count=n, grid=grid)


# ---------------------------------------------------------------------------
# Summaries and histograms.


@dataclass
class SummaryTable:
    mean: float
    freq_at_multiples: dict[float, float]
    censored_count: int
    sample_count: int


def summary_table(
    samples: Sequence[HittingTimeSample], k_list: Sequence[float]
) -> SummaryTable:
    """Mean of non-censored times plus Fr(T <= k * mean) per k.

    Frequencies are over all runs, censored ones counting as never below
    any threshold, so they are conservative and nondecreasing in k.
    """
    if not samples:
        raise EmptySampleError("summary needs at least one sample")
    finished = [s.stopping_time for s in samples if not s.censored]
    if not finished:
        raise EmptySampleError("all samples censored; mean undefined")
    mean = sum(finished) / len(finished)
    n = len(samples)
    freq = {}
    for k in k_list:
        hit = sum(1 for s in samples if not s.censored and s.stopping_time <= k * mean)
        freq[float(k)] = hit / n
    return SummaryTable(
        mean=mean,
        freq_at_multiples=freq,
        censored_count=n - len(finished),
        sample_count=n,
    )


@dataclass
class Histogram:
    edges: list[float]  # bin_count + 1 edges
    densities: list[float]  # per-bin density; sum(density * width) == 1
    counts: list[int]
    sample_count: int
    censored_excluded: int


def histogram_export(
    samples: Sequence[HittingTimeSample], bin_count: int = 50
) -> Histogram:
    """Equal-width density histogram of non-censored stopping times."""
    if bin_count < 1:
        raise ValueError("bin_count must be positive")
    times = [s.stopping_time for s in samples if not s.censored]
    if not times:
        raise EmptySampleError("histogram needs at least one non-censored sample")
    lo, hi = float(min(times)), float(max(times))
    if hi == lo:
        hi = lo + 1.0  # degenerate sample: one unit-width bin holds everything
    width = (hi - lo) / bin_count
    counts = [0] * bin_count
    for t in times:
        idx = min(int((t - lo) / width), bin_count - 1)
        counts[idx] += 1
    n = len(times)
    densities = [c / (n * width) for c in counts]
    edges = [lo + i * width for i in range(bin_count + 1)]
    return Histogram(
        edges=edges,
        densities=densities,
        counts=counts,
        sample_count=n,
        censored_excluded=len(samples) - n,
    )
