import math

import pytest
from hypothesis import given, settings, strategies as st

from burgers_fkpp.ode import IntegrationError, IntegratorConfig, integrate_to_event


def test_config_defaults_and_validation():
    cfg = IntegratorConfig()
    assert (cfg.rel_tol, cfg.abs_tol, cfg.event_tol, cfg.seed_offset) == (1e-10, 1e-12, 1e-12, 1e-8)
    t = cfg.tightened(0.5)
    assert (t.rel_tol, t.abs_tol, t.event_tol, t.seed_offset) == (5e-11, 5e-13, 5e-13, 1e-8)
    for bad in ({"rel_tol": 0.0}, {"abs_tol": -1.0}, {"event_tol": 0.0}, {"seed_offset": 0.0}, {"max_steps": 0}):
        with pytest.raises(ValueError):
            IntegratorConfig(**bad)


@settings(max_examples=30)
@given(st.floats(0.01, 0.99), st.floats(0.2, 5.0))
def test_exponential_decay_event_time(level, rate):
    f = lambda a, b: (-rate * a, 0.0)
    xi, (a, _), _ = integrate_to_event(f, (1.0, 0.0), lambda a, b: a - level, IntegratorConfig())
    assert abs(a - level) <= 1e-12
    assert xi == pytest.approx(math.log(1 / level) / rate, rel=1e-9)


def test_harmonic_oscillator_quarter_period():
    f = lambda a, b: (b, -a)
    xi, (a, b), trace = integrate_to_event(f, (1.0, 0.0), lambda a, b: a, IntegratorConfig(), record=True)
    assert xi == pytest.approx(math.pi / 2, abs=1e-9)
    assert b == pytest.approx(-1.0, abs=1e-9)
    assert trace[0] == (0.0, 1.0, 0.0)
    assert all(t2[0] > t1[0] for t1, t2 in zip(trace, trace[1:]))
    assert trace[-1][0] == xi


def test_errors_carry_state():
    f = lambda a, b: (-a, 0.0)
    with pytest.raises(IntegrationError) as info:
        integrate_to_event(f, (1.0, 0.0), lambda a, b: a - 1e-30, IntegratorConfig(max_steps=5))
    assert info.value.state[0] < 1.0
    with pytest.raises(IntegrationError):
        integrate_to_event(f, (1.0, 0.0), lambda a, b: a - 2.0, IntegratorConfig())
    with pytest.raises(IntegrationError):
        integrate_to_event(lambda a, b: (0.0, 0.0), (1.0, 0.0), lambda a, b: a - 0.5, IntegratorConfig(), xi_max=10.0)
