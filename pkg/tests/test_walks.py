"""Walk simulators against their exact mean oracles and draw contracts."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from driftlab.rng import RngStream
from driftlab.walks import (
    biased_walk_mean_dp,
    fair_walk_mean,
    lazy_walk_mean_dp,
    simulate_biased_walk,
    simulate_fair_walk,
    simulate_lazy_walk,
)


def test_fair_walk_started_on_boundary_stops_immediately():
    for x0 in (0, 7):
        sample, traj = simulate_fair_walk(RngStream(1), b=7, x0=x0, cap=100, record=True)
        assert sample.stopping_time == 0
        assert not sample.censored
        assert traj.values == [x0]


def test_fair_walk_from_middle_of_two_cells_takes_one_step():
    for seed in range(20):
        sample, _ = simulate_fair_walk(RngStream(seed), b=2, x0=1, cap=100)
        assert sample.stopping_time == 1


def test_biased_walk_deterministic_when_p_up_is_one():
    stream = RngStream(5)
    sample, traj = simulate_biased_walk(stream, b=5, x0=0, p_up=1.0, cap=100, record=True)
    assert sample.stopping_time == 5
    assert traj.values == [0, 1, 2, 3, 4, 5]
    # the step out of 0 is forced, so only 4 of the 5 steps drew a word
    assert stream.draw_counter == 4


def test_lazy_walk_started_at_zero_stops_immediately():
    sample, _ = simulate_lazy_walk(RngStream(3), b=5, x0=0, delta=0.5, cap=100)
    assert sample.stopping_time == 0
    assert not sample.censored


def test_sample_carries_run_id_and_stream_id():
    sample, _ = simulate_fair_walk(RngStream(9, stream_id=41), b=4, x0=2, cap=10**4, run_id=17)
    assert sample.run_id == 17
    assert sample.seed_used == 41


# -- mean oracles ------------------------------------------------------------


def hitting_mean_by_linear_solve(transient, transition):
    """E[T] per transient state from (I - Q) h = 1, as a cross-check."""
    k = len(transient)
    index = {s: i for i, s in enumerate(transient)}
    q = np.zeros((k, k))
    for s in transient:
        for s2, p in transition(s):
            if s2 in index:
                q[index[s], index[s2]] = p
    h = np.linalg.solve(np.eye(k) - q, np.ones(k))
    return {s: h[index[s]] for s in transient}


def test_biased_mean_dp_matches_matrix_solve():
    b, p = 23, 0.7
    def transition(x):
        if x == 0:
            return [(1, 1.0)]
        return [(x + 1, p), (x - 1, 1.0 - p)]

    h = hitting_mean_by_linear_solve(list(range(b)), transition)
    for x0 in range(b):
        assert biased_walk_mean_dp(b, x0, p) == pytest.approx(h[x0], rel=1e-9)
    assert biased_walk_mean_dp(b, b, p) == 0.0


def test_lazy_mean_dp_matches_matrix_solve_and_closed_form():
    b, delta = 11, 0.3
    def transition(x):
        if x == b:
            return [(b - 1, delta), (b, 1.0 - delta)]
        return [(x - 1, delta / 2.0), (x + 1, delta / 2.0), (x, 1.0 - delta)]

    h = hitting_mean_by_linear_solve(list(range(1, b + 1)), transition)
    for x0 in range(1, b + 1):
        assert lazy_walk_mean_dp(b, x0, delta) == pytest.approx(h[x0], rel=1e-9)
        assert lazy_walk_mean_dp(b, x0, delta) == pytest.approx(
            x0 * (2 * b - x0) / delta, rel=1e-9
        )
    assert lazy_walk_mean_dp(b, 0, delta) == 0.0


def test_lazy_mean_with_delta_one_is_the_one_sided_fair_walk():
    # delta = 1 removes the holding moves entirely
    assert lazy_walk_mean_dp(6, 2, 1.0) == pytest.approx(2 * (12 - 2))


def test_fair_mean_formula():
    assert fair_walk_mean(20, 10) == 100.0
    assert fair_walk_mean(20, 1) == 19.0
    assert fair_walk_mean(5, 0) == 0.0


# -- simulated means against the oracles -------------------------------------


def mean_stopping_time(simulate, runs, master_seed):
    total = 0
    for i in range(runs):
        sample, _ = simulate(RngStream(master_seed, stream_id=i))
        assert not sample.censored
        total += sample.stopping_time
    return total / runs


def test_fair_walk_mean_near_oracle():
    got = mean_stopping_time(
        lambda s: simulate_fair_walk(s, b=10, x0=5, cap=10**6), runs=4000, master_seed=71
    )
    assert got == pytest.approx(fair_walk_mean(10, 5), rel=0.08)


def test_biased_walk_mean_near_oracle():
    got = mean_stopping_time(
        lambda s: simulate_biased_walk(s, b=20, x0=0, p_up=0.75, cap=10**6),
        runs=3000,
        master_seed=72,
    )
    assert got == pytest.approx(biased_walk_mean_dp(20, 0, 0.75), rel=0.08)


def test_lazy_walk_mean_near_oracle():
    got = mean_stopping_time(
        lambda s: simulate_lazy_walk(s, b=8, x0=4, delta=0.5, cap=10**6),
        runs=2000,
        master_seed=73,
    )
    assert got == pytest.approx(lazy_walk_mean_dp(8, 4, 0.5), rel=0.08)


# -- draw accounting and censoring -------------------------------------------


def test_fair_and_lazy_consume_one_draw_per_step():
    stream = RngStream(11)
    sample, _ = simulate_fair_walk(stream, b=12, x0=6, cap=10**6)
    assert stream.draw_counter == sample.stopping_time

    stream = RngStream(12)
    sample, _ = simulate_lazy_walk(stream, b=6, x0=3, delta=0.4, cap=10**6)
    assert stream.draw_counter == sample.stopping_time


def test_biased_walk_skips_draws_on_forced_steps():
    stream = RngStream(13)
    sample, traj = simulate_biased_walk(stream, b=6, x0=3, p_up=0.6, cap=10**6, record=True)
    forced = sum(1 for v in traj.values[:-1] if v == 0)
    assert stream.draw_counter == sample.stopping_time - forced


def test_cap_censors_and_reports_partial_trajectory():
    sample, traj = simulate_fair_walk(RngStream(2), b=100, x0=50, cap=3, record=True)
    assert sample.censored
    assert sample.stopping_time == 3
    assert len(traj.values) == 4
    assert traj.censored


def test_cap_zero_from_interior_censors_at_zero():
    sample, _ = simulate_lazy_walk(RngStream(2), b=5, x0=2, delta=0.5, cap=0)
    assert sample.censored
    assert sample.stopping_time == 0


@pytest.mark.parametrize(
    "call",
    [
        lambda: simulate_fair_walk(RngStream(1), b=0, x0=0, cap=1),
        lambda: simulate_fair_walk(RngStream(1), b=3, x0=4, cap=1),
        lambda: simulate_fair_walk(RngStream(1), b=3, x0=-1, cap=1),
        lambda: simulate_fair_walk(RngStream(1), b=3, x0=1, cap=-1),
        lambda: simulate_biased_walk(RngStream(1), b=3, x0=1, p_up=0.5, cap=1),
        lambda: simulate_biased_walk(RngStream(1), b=3, x0=1, p_up=1.2, cap=1),
        lambda: simulate_lazy_walk(RngStream(1), b=3, x0=1, delta=0.0, cap=1),
        lambda: simulate_lazy_walk(RngStream(1), b=3, x0=1, delta=1.0001, cap=1),
        lambda: biased_walk_mean_dp(3, 1, 0.5),
        lambda: lazy_walk_mean_dp(0, 0, 0.5),
        lambda: fair_walk_mean(3, 5),
    ],
)
def test_parameter_validation(call):
    with pytest.raises(ValueError):
        call()


# -- path-shape properties ---------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32),
    b=st.integers(min_value=2, max_value=12),
    data=st.data(),
)
def test_fair_walk_path_has_unit_steps_and_absorbs(seed, b, data):
    x0 = data.draw(st.integers(min_value=0, max_value=b))
    sample, traj = simulate_fair_walk(RngStream(seed), b=b, x0=x0, cap=10**5, record=True)
    assert not sample.censored
    assert traj.values[-1] in (0, b)
    assert all(abs(p - q) == 1 for p, q in zip(traj.values, traj.values[1:]))
    assert all(0 <= v <= b for v in traj.values)


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32),
    b=st.integers(min_value=1, max_value=10),
    data=st.data(),
)
def test_lazy_walk_path_stays_in_range_with_small_steps(seed, b, data):
    x0 = data.draw(st.integers(min_value=0, max_value=b))
    sample, traj = simulate_lazy_walk(
        RngStream(seed), b=b, x0=x0, delta=0.5, cap=2000, record=True
    )
    assert all(abs(p - q) <= 1 for p, q in zip(traj.values, traj.values[1:]))
    assert all(0 <= v <= b for v in traj.values)
    if not sample.censored:
        assert traj.values[-1] == 0
