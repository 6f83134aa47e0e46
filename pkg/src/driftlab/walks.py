"""Synthetic walks with known hitting-time laws.

Three integer walks whose moments are chosen to sit exactly on the
hypotheses of the bound families in :mod:`driftlab.bounds`, so simulated
tails can be compared against theory with no modelling slack:

* fair walk on {0..b}, absorbed at both ends (zero drift, unit steps);
* biased walk, up-probability p_up > 1/2, reflecting at 0 (a visit to 0
  forces the next step up), absorbed at b;
* lazy zero-drift walk: +-1 each with probability delta/2, else hold;
  at the ceiling b only a down-move (probability delta) or a hold is
  possible; absorbed at 0.

Each simulator consumes one raw draw per step (none on forced moves) and
reports a HittingTimeSample plus, on request, the full trajectory.  The
``*_mean_*`` functions are independent oracles: exact expected hitting
times from the one-step recurrences, no simulation involved.
"""

from __future__ import annotations

from driftlab.rng import RngStream
from driftlab.trajectory import HittingTimeSample, Trajectory


def _finish(stream, run_id, t, censored, values):
    sample = HittingTimeSample(
        run_id=run_id, stopping_time=t, censored=censored, seed_used=stream.stream_id
    )
    traj = None
    if values is not None:
        traj = Trajectory(values=values, censored=censored, cap=None if not censored else t)
    return sample, traj


def simulate_fair_walk(
    stream: RngStream, b: int, x0: int, cap: int, record: bool = False,
    run_id: int = 0,
) -> tuple[HittingTimeSample, Trajectory | None]:
    """Unit-step zero-drift walk absorbed at 0 and b."""
    if b < 1 or not 0 <= x0 <= b:
        raise ValueError("need b >= 1 and 0 <= x0 <= b")
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    x, t = x0, 0
    values = [x] if record else None
    while 0 < x < b and t < cap:
        x += 1 if stream.next_bernoulli(0.5) else -1
        t += 1
        if record:
            values.append(x)
    return _finish(stream, run_id, t, 0 < x < b, values)


def simulate_biased_walk(
    stream: RngStream, b: int, x0: int, p_up: float, cap: int, record: bool = False,
    run_id: int = 0,
) -> tuple[HittingTimeSample, Trajectory | None]:
    """Upward-drifting walk, reflecting at 0, stopped on reaching b.

    p_up must exceed 1/2 so the additive drift 2*p_up - 1 is positive.  A
    step from 0 is forced upward and consumes no randomness.
    """
    if b < 1 or not 0 <= x0 <= b:
        raise ValueError("need b >= 1 and 0 <= x0 <= b")
    if not 0.5 < p_up <= 1.0:
        raise ValueError(f"p_up must lie in (1/2, 1], got {p_up!r}")
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    x, t = x0, 0
    values = [x] if record else None
    while x < b and t < cap:
        if x == 0:
            x = 1
        else:
            x += 1 if stream.next_bernoulli(p_up) else -1
        t += 1
        if record:
            values.append(x)
    return _finish(stream, run_id, t, x < b, values)


def simulate_lazy_walk(
    stream: RngStream, b: int, x0: int, delta: float, cap: int, record: bool = False,
    run_id: int = 0,
) -> tuple[HittingTimeSample, Trajectory | None]:
    """Zero-drift holding walk on {0..b}, absorbed at 0.

    Interior states move +-1 with probability delta/2 each and hold
    otherwise; at b the up-move is folded into the hold, so the chain
    keeps per-step second moment delta everywhere.  delta = 1 is the fair
    walk with one absorbing end.
    """
    if b < 1 or not 0 <= x0 <= b:
        raise ValueError("need b >= 1 and 0 <= x0 <= b")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta!r}")
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    x, t = x0, 0
    values = [x] if record else None
    while x > 0 and t < cap:
        u = stream.next_uniform()
        if x == b:
            if u < delta:
                x -= 1
        elif u < delta / 2.0:
            x -= 1
        elif u < delta:
            x += 1
        t += 1
        if record:
            values.append(x)
    return _finish(stream, run_id, t, x > 0, values)


# ---------------------------------------------------------------------------
# Exact mean oracles.  Solved from the first-step recurrences by forward
# substitution on the expected-time differences; O(b) and exact up to float
# rounding, independent of any simulation.


def fair_walk_mean(b: int, x0: int) -> float:
    """E[T] for the fair walk: the classical x0 * (b - x0)."""
    if b < 1 or not 0 <= x0 <= b:
        raise ValueError("need b >= 1 and 0 <= x0 <= b")
    return float(x0 * (b - x0))


def biased_walk_mean_dp(b: int, x0: int, p_up: float) -> float:
    """E[T] for the reflecting biased walk, from its one-step equations.

    With h(x) the expected time to b:  h(b) = 0,  h(0) = 1 + h(1),  and
    h(x) = 1 + p*h(x+1) + (1-p)*h(x-1) inside.  Writing d(x) = h(x) - h(x+1)
    gives d(0) = 1 and d(x) = (1 + (1-p) * d(x-1)) / p, then h(x0) is the
    tail sum of d.
    """
    if b < 1 or not 0 <= x0 <= b:
        raise ValueError("need b >= 1 and 0 <= x0 <= b")
    if not 0.5 < p_up <= 1.0:
        raise ValueError(f"p_up must lie in (1/2, 1], got {p_up!r}")
    q = 1.0 - p_up
    d = [0.0] * b
    d[0] = 1.0
    for x in range(1, b):
        d[x] = (1.0 + q * d[x - 1]) / p_up
    return float(sum(d[x0:]))


def lazy_walk_mean_dp(b: int, x0: int, delta: float) -> float:
    """E[T] for the lazy zero-drift walk, from its one-step equations.

    With h(x) the expected time to 0:  h(0) = 0, the ceiling equation
    delta * h(b) = 1 + delta * h(b-1) pins e(b) = h(b) - h(b-1) = 1/delta,
    and the interior equations give e(x) = e(x+1) + 2/delta going down.
    """
    if b < 1 or not 0 <= x0 <= b:
        raise ValueError("need b >= 1 and 0 <= x0 <= b")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta!r}")
    e = [0.0] * (b + 1)
    e[b] = 1.0 / delta
    for x in range(b - 1, 0, -1):
        e[x] = e[x + 1] + 2.0 / delta
    return float(sum(e[1 : x0 + 1]))
