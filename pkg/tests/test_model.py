import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from burgers_fkpp.model import (
    Q_MINUS,
    Q_PLUS,
    CutoffVariant,
    ModelParams,
    PhaseState,
    burgers_speed,
    c_crit,
    equilibria_eigen,
    explicit_pushed_orbit,
    inner_manifold_V,
    trapping_flux_lower,
    trapping_region_check,
    vector_field,
)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(1.0, 1.0)
    with pytest.raises(ValueError):
        ModelParams(-1.0, 0.1)
    assert ModelParams(4.0, 0.01, "cut-reaction").variant is CutoffVariant.CUT_REACTION_ONLY
    assert CutoffVariant.parse("CutBoth") is CutoffVariant.CUT_BOTH
    with pytest.raises(ValueError):
        CutoffVariant.parse("sideways")


@pytest.mark.parametrize("variant", list(CutoffVariant))
def test_q_minus_is_equilibrium(variant):
    assert vector_field(Q_MINUS, ModelParams(4.0, 0.01, variant), 1.7) == (0.0, 0.0)


def test_vector_field_examples():
    p = ModelParams(4.0, 0.01)
    assert vector_field(PhaseState(0.5, -0.5), p, 2.5) == pytest.approx((-0.5, 0.5 * 2.5 - 1.0 - 0.25))
    assert vector_field(PhaseState(0.005, -0.02), p, 2.5) == pytest.approx((-0.02, 0.05))


def test_heaviside_at_threshold_is_off():
    p = ModelParams(4.0, 0.01)
    U, V, c = 0.01, -0.03, 2.5
    assert vector_field(PhaseState(U, V), p, c)[1] == pytest.approx(-c * V)


def test_variants_differ_only_in_cut_region():
    s_out, s_in = PhaseState(0.3, -0.2), PhaseState(0.005, -0.01)
    vals = {v: vector_field(s_out, ModelParams(3.0, 0.01, v), 2.0) for v in CutoffVariant}
    ref = vals[CutoffVariant.NO_CUTOFF]
    assert vals[CutoffVariant.CUT_BOTH] == pytest.approx(ref, abs=1e-15)
    assert vals[CutoffVariant.CUT_REACTION_ONLY] == pytest.approx(ref, abs=1e-15)
    inner = vector_field(s_in, ModelParams(3.0, 0.01, CutoffVariant.CUT_REACTION_ONLY), 2.0)[1]
    assert inner == pytest.approx(-2.0 * -0.01 + 3.0 * 0.005 * -0.01)
    burg = vector_field(s_out, ModelParams(3.0, 0.01, CutoffVariant.BURGERS_CUT_ADVECTION), 2.0)[1]
    assert burg == pytest.approx(-2.0 * -0.2 + 3.0 * 0.3 * -0.2)


@given(st.floats(1e-4, 0.2), st.floats(-1.0, 0.0), st.floats(0.0, 6.0), st.floats(1.0, 4.0))
def test_cutoff_jump(eps, V, k, c):
    p = ModelParams(k, eps)
    above = vector_field(PhaseState(eps + 1e-13 * eps, V), p, c)[1]
    at = vector_field(PhaseState(eps, V), p, c)[1]
    assert above - at == pytest.approx(k * eps * V - eps * (1 - eps), abs=1e-11)


def test_c_crit_examples():
    assert c_crit(1.0) == 2.0
    assert c_crit(2.0) == 2.0
    # k/2 + 2/k at k = 4
    assert c_crit(4.0) == 2.5


@given(st.floats(0.0, 20.0))
def test_c_crit_shape(k):
    assert c_crit(k) >= 2.0
    assert (c_crit(k) == 2.0) == (k <= 2.0)


@given(st.floats(2.0, 10.0), st.floats(0.0, 1.0))
def test_explicit_orbit_is_exact(k, U):
    c = c_crit(k)
    V = explicit_pushed_orbit(U, k)
    dVdU = -0.5 * k * (1 - 2 * U)
    assert dVdU * V - (-c * V + k * U * V - U * (1 - U)) == pytest.approx(0.0, abs=1e-12)


def test_explicit_orbit_examples():
    assert explicit_pushed_orbit(0.0, 4.0) == 0.0
    assert explicit_pushed_orbit(0.5, 4.0) == -0.5
    assert explicit_pushed_orbit(1.0, 3.0) == 0.0


def test_inner_manifold():
    eps = 0.01
    assert inner_manifold_V(eps, ModelParams(4.0, eps), 2.4) == pytest.approx(-2.4 * eps)
    assert inner_manifold_V(0.0, ModelParams(4.0, eps), 2.4) == 0.0
    pr = ModelParams(4.0, eps, CutoffVariant.CUT_REACTION_ONLY)
    assert inner_manifold_V(eps, pr, 2.4) == pytest.approx(-2.4 * eps + 2.0 * eps ** 2)
    with pytest.raises(ValueError):
        inner_manifold_V(eps, ModelParams(4.0, eps, CutoffVariant.NO_CUTOFF), 2.4)


@given(st.floats(1e-4, 0.05), st.floats(0.5, 4.0), st.floats(0.0, 6.0))
def test_inner_manifold_is_invariant(eps, c, k):
    # V' = -cV (+ kUV) along U' = V must equal dV/dU * V
    for variant in (CutoffVariant.CUT_BOTH, CutoffVariant.CUT_REACTION_ONLY):
        p = ModelParams(k, eps, variant)
        U = 0.5 * eps
        V = inner_manifold_V(U, p, c)
        slope = -c if variant is CutoffVariant.CUT_BOTH else -c + k * U
        assert vector_field(PhaseState(U, V), p, c)[1] == pytest.approx(slope * V, rel=1e-12, abs=1e-18)


def test_burgers_speed():
    assert burgers_speed(0.0, 3.0) == 1.5
    assert burgers_speed(0.1, 2.0) == pytest.approx(0.99, abs=1e-15)
    assert burgers_speed(0.3, 0.0) == 0.0


def test_burgers_speed_matches_outer_orbit():
    # outer orbit through (1,0) with cut reaction: V = -cU + (k/2)U^2 + c - k/2; inner: V = -cU
    k, eps = 3.0, 0.2
    c = burgers_speed(eps, k)
    assert -c * eps + 0.5 * k * eps ** 2 + c - 0.5 * k == pytest.approx(-c * eps, abs=1e-15)


def test_eigen_q_plus_degenerate():
    pairs = equilibria_eigen(Q_PLUS, 1.0, 2.0)
    assert len(pairs) == 1
    assert pairs[0].value == pytest.approx(-1.0)
    assert pairs[0].vector == pytest.approx((-1.0, 1.0))


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0, 3.0])
def test_eigen_q_minus_saddle(k):
    vals = sorted(p.value for p in equilibria_eigen(Q_MINUS, k, 2.0))
    r = math.sqrt(k * k - 4 * k + 8)
    assert vals == pytest.approx(sorted([(k - 2 - r) / 2, (k - 2 + r) / 2]))
    for p in equilibria_eigen(Q_MINUS, k, 2.0):
        J = np.array([[0.0, 1.0], [1.0, -2.0 + k]])
        assert J @ np.array(p.vector) == pytest.approx(p.value * np.array(p.vector))


def test_eigen_q_plus_pushed():
    vals = sorted(p.value for p in equilibria_eigen(Q_PLUS, 4.0, c_crit(4.0)))
    assert vals == pytest.approx([-2.0, -0.5])


def test_eigen_rejects():
    with pytest.raises(ValueError):
        equilibria_eigen(PhaseState(0.5, 0.0), 1.0, 2.0)
    with pytest.raises(ValueError):
        equilibria_eigen(Q_PLUS, 1.0, 1.0)


def test_trapping():
    r = trapping_region_check(PhaseState(0.5, -0.1), 1.0)
    assert r.inside
    assert trapping_flux_lower(0.5, 2.0) == 0.0
    assert trapping_flux_lower(0.5, 1.0) == pytest.approx(0.125)
    assert not trapping_region_check(PhaseState(0.5, 0.1), 1.0).inside


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.999))
def test_trapping_fluxes_inward(U, k):
    assert trapping_region_check(PhaseState(U, 0.0), k).flux_upper <= 0.0
    assert trapping_flux_lower(U, k) >= 0.0
