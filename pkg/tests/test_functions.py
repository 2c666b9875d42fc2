"""Benchmark suite: catalog metadata, anchors, and the shift transform."""

import numpy as np
import pytest

from centerbias import (
    ConfigurationError,
    FUNCTION_IDS,
    ShiftedProblem,
    evaluate,
    make_function,
    make_problem,
    make_shift,
    shifted_evaluate,
)
from centerbias.functions import metadata_rows

DIM = 30

# id, name, modality, separability, box bound, f(0), x* coordinate
TABLE = [
    ("F01", "Sphere", "Unimodal", "Separable", 100.0, 0.0, 0.0),
    ("F02", "Schwefel 2.22", "Unimodal", "NonSeparable", 100.0, 0.0, 0.0),
    ("F03", "Schwefel 1.2", "Unimodal", "NonSeparable", 100.0, 0.0, 0.0),
    ("F04", "Schwefel 2.21", "Unimodal", "Separable", 100.0, 0.0, 0.0),
    ("F05", "Rosenbrock", "Unimodal", "NonSeparable", 30.0, 29.0, 1.0),
    ("F06", "Step", "Unimodal", "Separable", 100.0, 7.5, -0.5),
    ("F07", "Quartic with noise", "Unimodal", "Separable", 1.28, 0.0, 0.0),
    ("F08", "Schwefel 2.26", "Multimodal", "Separable", 500.0, 0.0, 420.9687),
    ("F09", "Rastrigin", "Multimodal", "Separable", 5.12, 0.0, 0.0),
    ("F10", "Ackley", "Multimodal", "NonSeparable", 32.0, 0.0, 0.0),
    ("F11", "Griewank", "Multimodal", "NonSeparable", 600.0, 0.0, 0.0),
    ("F12", "Penalized1", "Multimodal", "NonSeparable", 50.0, 1.67, -1.0),
    ("F13", "Penalized2", "Multimodal", "Separable", 50.0, 3.0, 1.0),
]


@pytest.mark.parametrize("fid,name,modality,separability,bound,f0,xstar", TABLE)
def test_catalog_metadata(fid, name, modality, separability, bound, f0, xstar):
    f = make_function(fid, DIM)
    assert f.name == name
    assert f.modality == modality
    assert f.separability == separability
    assert f.bound == bound
    assert (f.low, f.high) == (-bound, bound)
    assert f.x_star == xstar


@pytest.mark.parametrize("fid,name,modality,separability,bound,f0,xstar", TABLE)
def test_value_at_zero_vector(fid, name, modality, separability, bound, f0, xstar):
    f = make_function(fid, DIM)
    value = f.evaluate(np.zeros(DIM))
    if fid == "F12":
        assert value == pytest.approx(f0, abs=0.01)
    else:
        assert value == pytest.approx(f0, abs=1e-9)


@pytest.mark.parametrize("fid", FUNCTION_IDS)
def test_value_at_optimum(fid):
    f = make_function(fid, DIM)
    value = f.evaluate(f.optimum_point())
    if f.f_star == 0.0:
        assert abs(value) <= 1e-6
    else:
        assert value == pytest.approx(f.f_star, rel=1e-6)


def test_f08_optimum_matches_printed_value():
    f = make_function("F08", 30)
    assert f.f_star == pytest.approx(-1.2569e4, rel=5e-3)
    assert f.evaluate(f.optimum_point()) == pytest.approx(-418.982887 * 30, rel=5e-3)


@pytest.mark.parametrize("fid", FUNCTION_IDS)
def test_no_random_point_beats_optimum(fid):
    f = make_function(fid, DIM)
    rng = np.random.default_rng(1234)
    points = rng.uniform(f.low, f.high, size=(10_000, DIM))
    values = f.evaluate_batch(points)
    assert values.min() >= f.f_star - 1e-9


@pytest.mark.parametrize("fid", ["F01", "F09"])
def test_separable_coordinates_act_independently(fid):
    # changing coordinate i shifts the value by an amount that does not
    # depend on the other coordinates
    f = make_function(fid, DIM)
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = rng.uniform(f.low, f.high, DIM)
        y = rng.uniform(f.low, f.high, DIM)
        i = rng.integers(DIM)
        y[i] = x[i]
        h = rng.uniform(-1.0, 1.0)
        xp, yp = x.copy(), y.copy()
        xp[i] += h
        yp[i] += h
        dx = f.evaluate(xp) - f.evaluate(x)
        dy = f.evaluate(yp) - f.evaluate(y)
        assert dx == pytest.approx(dy, rel=1e-9, abs=1e-7)


def test_evaluator_is_total_outside_box():
    f = make_function("F01", DIM)
    assert f.evaluate(np.full(DIM, 1e3)) == pytest.approx(DIM * 1e6)


def test_dimension_mismatch_rejected():
    f = make_function("F01", DIM)
    with pytest.raises(ValueError):
        f.evaluate(np.zeros(DIM + 1))


def test_nan_point_rejected():
    f = make_function("F01", DIM)
    x = np.zeros(DIM)
    x[3] = np.nan
    with pytest.raises(ValueError):
        f.evaluate(x)
    # NaN must be caught even where comparisons would silently drop it
    for fid in ("F04", "F06", "F12", "F13"):
        with pytest.raises(ValueError):
            make_function(fid, DIM).evaluate(x)


def test_unknown_id_rejected():
    with pytest.raises(ConfigurationError):
        make_function("F99", DIM)
    with pytest.raises(ConfigurationError):
        make_function("sphere", DIM)


def test_dimension_must_be_at_least_two():
    with pytest.raises(ConfigurationError):
        make_function("F01", 1)


def test_f_star_scales_with_dimension_only_for_f08():
    assert make_function("F08", 10).f_star == pytest.approx(-4189.829, rel=1e-4)
    assert make_function("F01", 10).f_star == 0.0


def test_rastrigin_all_ones():
    # per coordinate: 1 - 10 cos(2 pi) + 10 = 1
    f = make_function("F09", DIM)
    assert f.evaluate(np.ones(DIM)) == pytest.approx(30.0, rel=1e-12)


# --- noise hook ------------------------------------------------------------

def test_quartic_noise_adds_one_uniform_draw_per_call():
    f = make_function("F07", DIM)
    x = np.full(DIM, 0.5)
    base = f.evaluate(x)
    rng = np.random.default_rng(99)
    noisy = [f.evaluate(x, rng) for _ in range(200)]
    deltas = np.array(noisy) - base
    assert np.all(deltas >= 0.0) and np.all(deltas < 1.0)
    assert deltas.std() > 0.1  # actually random, not constant


def test_noise_ignored_for_other_functions():
    rng = np.random.default_rng(0)
    f = make_function("F01", DIM)
    x = np.full(DIM, 1.5)
    assert f.evaluate(x, rng) == f.evaluate(x)


def test_noiseless_quartic_is_deterministic():
    f = make_function("F07", DIM)
    x = np.full(DIM, 0.25)
    assert f.evaluate(x) == f.evaluate(x)


# --- step variants ----------------------------------------------------------

def test_step_floor_variant_behind_flag():
    smooth = make_function("F06", DIM)
    floor = make_function("F06", DIM, floor_step=True)
    zero = np.zeros(DIM)
    assert smooth.evaluate(zero) == 7.5
    assert floor.evaluate(zero) == 0.0
    # both share the Table metadata optimum location
    assert floor.evaluate(floor.optimum_point()) == 0.0


# --- shift ------------------------------------------------------------------

def test_shift_vector_examples():
    f01 = make_function("F01", DIM)
    s = make_shift(f01, 0.1)
    assert np.all(s.vector == 20.0)
    f09 = make_function("F09", DIM)
    assert np.all(make_shift(f09, 0.1).vector == pytest.approx(1.024))
    assert np.all(make_shift(f01, 0.0).vector == 0.0)


def test_shift_fraction_bounds():
    f = make_function("F01", DIM)
    with pytest.raises(ConfigurationError):
        make_shift(f, 0.5)
    with pytest.raises(ConfigurationError):
        make_shift(f, -0.01)


def test_shifted_evaluate_matches_base_on_moved_point():
    p = make_problem("F01", DIM, 0.1)
    assert p.evaluate(np.full(DIM, -20.0)) == 0.0
    assert p.evaluate(np.zeros(DIM)) == pytest.approx(12_000.0)


@pytest.mark.parametrize("fid", FUNCTION_IDS)
def test_shift_relation_bitwise(fid):
    p = make_problem(fid, DIM, 0.1)
    rng = np.random.default_rng(7)
    pts = rng.uniform(p.base.low, p.base.high, size=(1000, DIM))
    via_problem = p.evaluate_batch(pts)
    via_base = p.base.evaluate_batch(pts + p.shift.vector)
    assert np.array_equal(via_problem, via_base)


@pytest.mark.parametrize("fid", FUNCTION_IDS)
def test_zero_shift_identity_bitwise(fid):
    p = make_problem(fid, DIM, 0.0)
    rng = np.random.default_rng(8)
    pts = rng.uniform(p.base.low, p.base.high, size=(1000, DIM))
    assert np.array_equal(p.evaluate_batch(pts), p.base.evaluate_batch(pts))


@pytest.mark.parametrize("fid", FUNCTION_IDS)
def test_shifted_optimum_stays_in_box(fid):
    p = make_problem(fid, DIM, 0.1)
    moved = p.base.optimum_point() - p.shift.vector
    assert np.all(moved >= p.base.low) and np.all(moved <= p.base.high)
    value = p.evaluate(moved)
    if p.f_star == 0.0:
        assert abs(value) <= 1e-6
    else:
        assert value == pytest.approx(p.f_star, rel=1e-6)


def test_functional_wrappers():
    f = make_function("F05", DIM)
    assert evaluate(f, np.zeros(DIM)) == 29.0
    p = make_problem("F05", DIM, 0.0)
    assert shifted_evaluate(p, np.zeros(DIM)) == 29.0


def test_metadata_rows_shape():
    rows = metadata_rows(30)
    assert len(rows) == 13
    assert list(rows[0].keys()) == [
        "id", "name", "modality", "separability", "low", "high",
        "f_star", "x_star", "f_at_zero",
    ]
    by_id = {r["id"]: r for r in rows}
    assert by_id["F05"]["f_at_zero"] == 29.0
    assert by_id["F08"]["x_star"] == 420.9687
