"""Random-walk arm-preference baseline for a two-armed restless bandit.

Two Bernoulli arms whose mean pair is swapped at L unknown change times.
The learner keeps a preferred arm a+ and each round, with probability
p = sqrt(L/T), opens a challenge instead of the plain pull: both arms are
pulled repeatedly while the reward-difference walk S accumulates, until S
reaches +1 (keep the preference) or falls to -sqrt(T/L) (swap).  A
challenge runs to completion within its round: the horizon clock counts
loop rounds, not pulls, so changes land between rounds and never interrupt
a challenge.

Regret accounting follows the preferred arm.  In "mean_gap" mode every
pull of a+ while it is not the better arm costs the mean gap; a challenge
round therefore accrues one gap charge per inner iteration when the
preference is misranked and nothing when it is correct (its a- pulls are
exploration, not charged).  "realized" mode replaces each charge with the
realized reward difference: inside a challenge the better arm's draw is
already in hand, on plain rounds a counterfactual draw stands in for it.
Both modes agree in expectation.

Era/sub-era bookkeeping: the L changes cut the horizon into L + 1 eras;
sub-eras are the maximal round intervals on which both the mean assignment
and the preferred arm are constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from driftlab.rng import RngStream

ACCOUNTING_MODES = ("mean_gap", "realized")


@dataclass(frozen=True)
class BanditEnv:
    """Horizon, change schedule, and the two arms' initial means."""

    horizon: int
    mu1: float
    mu2: float
    change_times: tuple[int, ...]

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be positive")
        for name, mu in (("mu1", self.mu1), ("mu2", self.mu2)):
            if not 0.0 <= mu <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {mu!r}")
        if len(set(self.change_times)) != len(self.change_times):
            raise ValueError("change times must be distinct")
        for t in self.change_times:
            if not 2 <= t <= self.horizon:
                raise ValueError(f"change time {t} outside [2, horizon]")
        if len(self.change_times) >= self.horizon:
            raise ValueError("need fewer changes than rounds")


def sample_change_times(stream: RngStream, horizon: int, count: int) -> tuple[int, ...]:
    """count distinct rounds drawn uniformly from {2, ..., horizon}, sorted.

    Partial Fisher-Yates over the candidate range, so count close to the
    maximum works as well as count = 0 (empty schedule).
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    if count < 0:
        raise ValueError("count must be nonnegative")
    pool = list(range(2, horizon + 1))
    if count > len(pool):
        raise ValueError(f"cannot draw {count} distinct times from {len(pool)} candidates")
    for i in range(count):
        j = i + stream.next_index(len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
    return tuple(sorted(pool[:count]))


@dataclass
class RegretLedger:
    """Outcome of one run: totals plus counting diagnostics."""

    total_regret: float
    swaps: int
    mistakes: int
    eras: int
    sub_eras: int
    rounds: int
    pulls: int
    per_round: list[float] | None = None


@dataclass
class ChallengeOutcome:
    """One completed challenge: final preference order and its cost."""

    a_plus: int
    a_minus: int
    swap: bool
    inner_rounds: int
    regret: float


def run_challenge(
    mu: list[float],
    a_plus: int,
    a_minus: int,
    stream: RngStream,
    s_threshold: float,
    accounting: str = "mean_gap",
) -> ChallengeOutcome:
    """Pull both arms until the difference walk S leaves (-s, 1).

    The means stay fixed for the whole challenge (it completes within one
    horizon round).  Each inner iteration draws both arms once, adds
    r+ - r- to S, and charges the a+ pull's regret.  Exit at S >= 1 keeps
    the order, at S <= -s swaps it.
    """
    misranked = mu[a_plus] < mu[a_minus]
    gap = mu[a_minus] - mu[a_plus]
    s_val = 0.0
    inner = 0
    regret = 0.0
    while True:
        r_plus = 1.0 if stream.next_bernoulli(mu[a_plus]) else 0.0
        r_minus = 1.0 if stream.next_bernoulli(mu[a_minus]) else 0.0
        s_val += r_plus - r_minus
        inner += 1
        if misranked:
            # the better arm's realized draw is r_minus, already in hand
            regret += (r_minus - r_plus) if accounting == "realized" else gap
        if s_val >= 1.0:
            return ChallengeOutcome(a_plus, a_minus, False, inner, regret)
        if s_val <= -s_threshold:
            return ChallengeOutcome(a_minus, a_plus, True, inner, regret)


def run_rwab(
    env: BanditEnv,
    stream: RngStream,
    accounting: str = "mean_gap",
    record_per_round: bool = False,
) -> RegretLedger:
    """Play the full horizon; returns totals and bookkeeping.

    The number of changes L = len(env.change_times) sets the challenge
    probability sqrt(L/T) and the swap threshold sqrt(T/L), so at least
    one change is required.
    """
    if accounting not in ACCOUNTING_MODES:
        raise ValueError(f"accounting must be one of {ACCOUNTING_MODES}")
    ell = len(env.change_times)
    if ell == 0:
        raise ValueError("need at least one change time (swap threshold undefined at L=0)")
    horizon = env.horizon
    p = math.sqrt(ell / horizon)
    s_threshold = math.sqrt(horizon / ell)
    change_set = frozenset(env.change_times)

    mu = [env.mu1, env.mu2]
    swapped = False
    a_plus, a_minus = 0, 1
    total = 0.0
    pulls = 0
    swaps = mistakes = 0
    sub_eras = 0
    prev_pair: tuple | None = None
    per_round: list[float] | None = [] if record_per_round else None
    plain_rounds = challenge_rounds = 0

    for clock in range(1, horizon + 1):
        if clock in change_set:
            mu[0], mu[1] = mu[1], mu[0]
            swapped = not swapped
        pair = (swapped, a_plus)
        if pair != prev_pair:
            sub_eras += 1
            prev_pair = pair
        if stream.next_bernoulli(p):
            challenge_rounds += 1
            started_correct = mu[a_plus] >= mu[a_minus]
            out = run_challenge(mu, a_plus, a_minus, stream, s_threshold, accounting)
            pulls += 2 * out.inner_rounds
            if out.swap:
                swaps += 1
                # no change can land mid-challenge, so a swap that starts
                # from the better arm is always a mistake
                if started_correct:
                    mistakes += 1
            a_plus, a_minus = out.a_plus, out.a_minus
            round_regret = out.regret
        else:
            plain_rounds += 1
            pulls += 1
            if mu[a_plus] < mu[a_minus]:
                if accounting == "realized":
                    r_plus = 1.0 if stream.next_bernoulli(mu[a_plus]) else 0.0
                    r_best = 1.0 if stream.next_bernoulli(mu[a_minus]) else 0.0
                    round_regret = r_best - r_plus
                else:
                    round_regret = mu[a_minus] - mu[a_plus]
            else:
                if accounting == "realized":
                    stream.next_bernoulli(mu[a_plus])  # the pull itself
                round_regret = 0.0
        total += round_regret
        if per_round is not None:
            per_round.append(round_regret)

    if plain_rounds + challenge_rounds != horizon:
        raise AssertionError(
            f"clock leak: {plain_rounds} plain + {challenge_rounds} challenge "
            f"rounds over a horizon of {horizon}"
        )
    return RegretLedger(
        total_regret=total,
        swaps=swaps,
        mistakes=mistakes,
        eras=ell + 1,
        sub_eras=sub_eras,
        rounds=horizon,
        pulls=pulls,
        per_round=per_round,
    )


def theoretical_regret_bound(horizon: int, changes: int, eps: float) -> tuple[float, float]:
    """Regret ceiling 480*eps*(L + sqrt(L*T)) and the confidence it holds with.

    The confidence 1 - 2*exp(-sqrt(eps)/e) is clamped at 0; it only
    becomes informative for eps around 40 and beyond.
    """
    if eps < 1:
        raise ValueError("eps must be at least 1")
    if horizon < 1 or changes < 1:
        raise ValueError("need horizon >= 1 and changes >= 1")
    bound = 480.0 * eps * (changes + math.sqrt(changes * horizon))
    confidence = max(0.0, 1.0 - 2.0 * math.exp(-math.sqrt(eps) / math.e))
    return bound, confidence
