import random

import pytest

from dirskill.benchmarks import (
    ForecasterKind,
    ReferenceForecaster,
    generate_directions,
    null_distribution,
    reference_series,
    simulate_trial,
    table_from_directions,
)
from dirskill.classify import BandSpec, ClassificationConfig, Direction, classify_series
from dirskill.errors import DirskillError, OutOfRangeError
from dirskill.scores import psi

U, D = Direction.UP, Direction.DOWN


def test_constant_generators():
    obs = [U, D] * 5
    assert generate_directions(ReferenceForecaster("always_up"), obs) == [U] * 10
    assert generate_directions(ReferenceForecaster("always_down"), obs) == [D] * 10
    assert generate_directions(ReferenceForecaster("random", p_up=1.0, seed=3), obs) == [U] * 10
    assert generate_directions(ReferenceForecaster("random", p_up=0.0, seed=3), obs) == [D] * 10


def test_no_change_repeats_previous_direction():
    obs = [U, U, D, D]
    assert generate_directions(ReferenceForecaster("no_change"), obs) == [U, U, U, D]
    assert generate_directions(ReferenceForecaster("no_change", first_step="exclude"), obs) == [U, U, D]


def test_direction_persistence_is_not_a_zero_skill_forecaster():
    # the repeat-previous-direction rule does carry information
    obs = [U, U, D, D]
    fc = generate_directions(ReferenceForecaster("no_change"), obs)
    assert psi(table_from_directions(fc, obs)) != 0.0


def test_random_generator_is_seeded():
    obs = [U] * 50
    f = ReferenceForecaster("random", p_up=0.3, seed=11)
    assert generate_directions(f, obs) == generate_directions(f, obs)
    assert generate_directions(f, obs) != generate_directions(ReferenceForecaster("random", p_up=0.3, seed=12), obs)


def test_forecaster_validation():
    with pytest.raises(OutOfRangeError):
        ReferenceForecaster("random", p_up=1.5)
    with pytest.raises(OutOfRangeError):
        ReferenceForecaster("random", seed=-1)
    with pytest.raises(OutOfRangeError):
        ReferenceForecaster("random", seed=2**64)
    with pytest.raises(ValueError):
        ReferenceForecaster("sometimes")
    with pytest.raises(DirskillError):
        generate_directions(ReferenceForecaster("always_up"), [])


@pytest.mark.parametrize("kind", ["always_up", "always_down"])
def test_constant_value_forecasts_score_zero(kind):
    rng = random.Random(5)
    actual = [rng.uniform(-5, 5) for _ in range(30)]
    res = classify_series(reference_series(actual, kind))
    assert psi(res.table()) == 0.0


@pytest.mark.parametrize("policy", ["as_up", "as_down"])
def test_no_change_value_forecast_scores_zero(policy):
    rng = random.Random(9)
    actual = [rng.uniform(-5, 5) for _ in range(30)]
    res = classify_series(reference_series(actual, "no_change"), config=ClassificationConfig(tie_policy=policy))
    assert psi(res.table()) == 0.0


def test_simulate_trial_perfect_forecaster():
    t = simulate_trial(4, 0, 50, 0.5, None)
    assert t.b == t.c == 0


def test_single_trial_passthrough():
    s = null_distribution(n=50, p_up_forecast=None, trials=1, seed=21)
    assert s.mean_psi == psi(simulate_trial(21, 0, 50, 0.5, None))
    assert s.sd_psi == 0.0


def test_null_distribution_centered():
    s = null_distribution(n=400, trials=2000, seed=1)
    assert abs(s.mean_psi) < 0.03
    assert s.quantiles[0.05] < s.quantiles[0.5] < s.quantiles[0.95]


def test_null_distribution_deterministic_across_workers():
    a = null_distribution(n=60, trials=500, seed=99, workers=1)
    b = null_distribution(n=60, trials=500, seed=99, workers=3)
    c = null_distribution(n=60, trials=500, seed=99, workers=1)
    assert a == b == c
    assert null_distribution(n=60, trials=500, seed=100) != a


def test_forecast_always_up_gives_zero_every_trial():
    s = null_distribution(n=40, p_up_forecast=1.0, trials=200, seed=2)
    assert s.mean_psi == 0.0 and s.sd_psi == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=1), dict(n=10, trials=0), dict(n=10, p_up_observed=2.0), dict(n=10, quantiles=(0.0,)), dict(n=10, seed=-3)],
)
def test_null_distribution_validation(kwargs):
    with pytest.raises(OutOfRangeError):
        null_distribution(**kwargs)
