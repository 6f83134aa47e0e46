"""Recorded runs and their hitting times.

A Trajectory is the sampled path of a scalar potential, one value per step
starting at step 0.  A HittingTimeSample is the one-number summary a
simulator hands to the statistics layer: when the run first reached its
target, or that it was cut off at the cap.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


@dataclass
class Trajectory:
    """Path of a potential: values[t] is the potential after t steps.

    A censored trajectory ran into its cap, so it records exactly
    cap + 1 values (steps 0..cap) and its endpoint is not a hitting event.
    """

    values: list[float]
    censored: bool = False
    cap: int | None = None

    def __post_init__(self):
        if not self.values:
            raise ValueError("a trajectory records at least its starting value")
        if self.censored:
            if self.cap is None:
                raise ValueError("censored trajectory needs its cap")
            if len(self.values) != self.cap + 1:
                raise ValueError(
                    f"censored trajectory must hold cap+1={self.cap + 1} values, "
                    f"got {len(self.values)}"
                )

    def steps(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class HittingTimeSample:
    """Scalar outcome of one replication, usually a stopping time.

    censored means the run was cut off: stopping_time then equals the cap
    and the true hitting time is only known to be at least that large.
    The bandit experiment reuses the slot for its total regret (a float,
    never censored); everything downstream only needs an ordered scalar.
    """

    run_id: int
    stopping_time: float
    censored: bool
    seed_used: int

    def __post_init__(self):
        if self.run_id < 0:
            raise ValueError("run_id must be nonnegative")
        if self.stopping_time < 0:
            raise ValueError("stopping_time must be nonnegative")


def first_hitting_time(traj: Trajectory, target: Callable[[float], bool]) -> int | None:
    """Smallest t with target(values[t]), or None if never hit on record."""
    return kth_hitting_time(traj, target, 0)


def kth_hitting_time(
    traj: Trajectory, target: Callable[[float], bool], k: int
) -> int | None:
    """Smallest t >= k with target(values[t]); None when the record ends first.

    k = 0 recovers the plain first hitting time.  Whatever the path did
    before step k is ignored, so the result is nondecreasing in k.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    for t in range(k, len(traj.values)):
        if target(traj.values[t]):
            return t
    return None


# ---------------------------------------------------------------------------
# CSV export.  Floats are written in shortest round-trip form (Python's str),
# so identical data always produces identical bytes.


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def samples_to_csv(
    samples: Iterable[HittingTimeSample],
    extra_header: Sequence[str] = (),
    extra_rows: Sequence[Sequence] = (),
) -> str:
    """Render samples as CSV text: run_id,seed,stopping_time,censored[,...].

    extra_header/extra_rows append per-run diagnostic columns; extra_rows
    must be aligned with samples by position.
    """
    header = ["run_id", "seed", "stopping_time", "censored", *extra_header]
    lines = [",".join(header)]
    extras = list(extra_rows)
    for i, s in enumerate(samples):
        row = [str(s.run_id), str(s.seed_used), str(s.stopping_time),
               format_value(s.censored)]
        if extras:
            row.extend(format_value(v) for v in extras[i])
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def trajectory_to_csv(traj: Trajectory) -> str:
    """Render one trajectory as CSV text with header step,value."""
    lines = ["step,value"]
    lines.extend(f"{t},{format_value(v)}" for t, v in enumerate(traj.values))
    return "\n".join(lines) + "\n"


def write_text(path: str, text: str) -> None:
    """Write text with fixed newline handling so bytes never vary by platform."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
