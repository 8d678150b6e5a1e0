import itertools
import math
import random

import numpy as np
import pytest

import oracles
from quadgraph.curves import (
    CLOSED3_CONSTANT,
    closed3_constant_for,
    delta,
    frobenius_angle,
    frobenius_trace,
    leaf_count_closed3,
    pair_traces,
    resolve_closed3_constant,
    trace_record,
)
from quadgraph.field import FieldError, build_field, primes_between


def test_trace_examples():
    assert frobenius_trace(build_field(5), 0, 1, 2) == -2
    assert frobenius_trace(build_field(7), 0, 1, 2) == 0


@pytest.mark.parametrize("p", primes_between(5, 31))
def test_trace_against_point_count(p):
    F = build_field(p)
    for a, b, c in itertools.combinations(range(p), 3):
        assert frobenius_trace(F, a, b, c) == oracles.trace(p, a, b, c)


@pytest.mark.parametrize("p", primes_between(5, 43))
def test_pair_traces_table(p):
    F = build_field(p)
    T = pair_traces(F)
    rng = random.Random(p)
    for _ in range(100):
        a, b, c = rng.sample(range(p), 3)
        assert T[(a - c) % p, (b - c) % p] == frobenius_trace(F, a, b, c)


def test_closed3_examples():
    assert leaf_count_closed3(build_field(7), 0, 1, 2) == 0
    assert leaf_count_closed3(build_field(5), 0, 1, 2) == oracles.leaves(5, (0, 1, 2))


def test_constant_resolves_to_six():
    assert CLOSED3_CONSTANT == 6
    assert resolve_closed3_constant(61) == {6}


def test_constant_for_p3():
    F = build_field(3)
    assert closed3_constant_for(F, 0, 1, 2, oracles.leaves(3, (0, 1, 2))) == 6


@pytest.mark.parametrize("p", primes_between(3, 31))
def test_closed3_against_oracle(p):
    F = build_field(p)
    for trip in itertools.combinations(range(p), 3):
        assert leaf_count_closed3(F, *trip) == oracles.leaves(p, trip)


def test_distinctness_enforced():
    F = build_field(7)
    with pytest.raises(FieldError):
        frobenius_trace(F, 1, 1, 2)
    with pytest.raises(FieldError):
        leaf_count_closed3(F, 0, 2, 2)


def test_angle_examples():
    assert frobenius_angle(0, 101) == pytest.approx(math.pi / 2)
    assert frobenius_angle(4, 5) == pytest.approx(0.4636, abs=1e-4)
    assert frobenius_angle(-2, 5) == pytest.approx(2.0344, abs=1e-4)


def test_angle_rejects_hasse_violation():
    with pytest.raises(ValueError):
        frobenius_angle(5, 5)


def test_delta_example():
    assert delta(build_field(7), 0, 1, 2) == pytest.approx(-0.875 / math.sqrt(7))
    assert delta(build_field(7), 0, 1, 2) == pytest.approx(-0.3307, abs=1e-4)


@pytest.mark.parametrize("p", [59, 61, 101])
def test_delta_corollary_bound(p):
    F = build_field(p)
    rng = random.Random(p)
    for _ in range(300):
        trip = rng.sample(range(p), 3)
        assert abs(delta(F, *trip)) <= 0.25 + 2 / math.sqrt(p)


def test_permutation_invariance_sample():
    rng = random.Random(7)
    for _ in range(300):
        p = rng.choice(primes_between(5, 200))
        F = build_field(p)
        trip = rng.sample(range(p), 3)
        ts = {frobenius_trace(F, *q) for q in itertools.permutations(trip)}
        ls = {leaf_count_closed3(F, *q) for q in itertools.permutations(trip)}
        assert len(ts) == 1 and len(ls) == 1


def test_trace_record_fields():
    r = trace_record(build_field(7), 0, 1, 2)
    assert r.triple == (0, 1, 2)
    assert r.t == 0
    assert r.psi == pytest.approx(math.pi / 2)
    assert r.delta == pytest.approx(-0.3307, abs=1e-4)


def test_trace_for_large_p_without_table():
    p = 1_000_003
    F = build_field(p)
    t = frobenius_trace(F, 0, 1, 2)
    assert t * t <= 4 * p
    assert isinstance(t, (int, np.integer))
