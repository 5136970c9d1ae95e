import math

import numpy as np
import pytest

from gue_linstat import testfns
from gue_linstat.testfns import Regularity, builtin

FIXED_IDS = ["identity", "square", "constant", "step", "bump", "hoelder_alpha",
             "series_convergent", "series_divergent", "cheb_1", "cheb_7", "hoelder_0.6"]


def test_known_values():
    assert builtin("identity").known_v == 1.0
    assert builtin("square").known_v == 2.0
    step = builtin("step")
    assert step.known_v is None
    assert step.regularity is Regularity.BOUNDED_VARIATION_JUMP
    assert builtin("cheb_6").known_v == 1.5


@pytest.mark.parametrize("fid", FIXED_IDS)
def test_every_builtin_is_bounded(fid):
    x = np.linspace(-2, 2, 10_000)
    vals = builtin(fid)(x)
    assert np.all(np.isfinite(vals))
    assert np.max(np.abs(vals)) < 10


def test_unknown_ids():
    for bad in ("nope", "cheb_0", "cheb_x", "hoelder_1.5"):
        with pytest.raises((KeyError, ValueError)):
            builtin(bad)


def test_hoelder_inequality():
    f = builtin("hoelder_alpha")
    assert f.alpha == 0.75
    rng = np.random.default_rng(11)
    x, y = rng.uniform(-2, 2, (2, 10_000))
    assert np.all(np.abs(f(x) - f(y)) <= np.abs(x - y) ** f.alpha + 1e-15)


def test_hoelder_requires_exponent():
    with pytest.raises(ValueError):
        testfns.TestFunction("bad", np.abs, Regularity.HOELDER, alpha=1.0)


def test_step_jump_in_bulk():
    f = builtin("step")
    assert f(np.array([-1e-12, 1e-12])).tolist() == [0.0, 1.0]
    assert 0.0 in f.breakpoints


def test_bump_support():
    f = builtin("bump")
    assert np.all(f(np.array([-2.0, -1.0, 1.0, 1.5])) == 0)
    assert f(0.0) == pytest.approx(math.exp(-1))


def test_clamping_outside_interval():
    assert builtin("bump")(5.0) == builtin("bump")(2.0)
    assert builtin("identity")(3.0) == 3.0  # polynomials are evaluated as-is


def conv_rule(k):
    return 1 / (k * math.log(k))


def div_rule(k):
    return 1 / (k * math.sqrt(math.log(k)))


def test_convergent_partial_sums_settle():
    _, ps = testfns.series_variance_class(conv_rule, 20_000)
    steps = [ps[k] - ps[k // 4] for k in (500, 2000, 8000, 19_998)]
    assert all(a > b for a, b in zip(steps, steps[1:]))
    assert steps[-1] < 0.01


def test_divergent_partial_sums_grow():
    _, ps = testfns.series_variance_class(div_rule, 2000)
    # ps[j] holds the sum up to k = j + 2
    assert ps[1998] - ps[498] > 0.01


def test_zero_series():
    f, ps = testfns.series_variance_class(lambda k: 0.0, 50)
    assert np.all(ps == 0)
    assert np.all(f(np.linspace(-2, 2, 9)) == 0)


def test_series_guard():
    with pytest.raises(ValueError):
        testfns.series_variance_class(conv_rule, 1)


def test_series_functions_are_continuous():
    f = builtin("series_divergent")
    incs = []
    for pts in (2_000, 20_000, 200_000):
        incs.append(np.max(np.abs(np.diff(f(np.linspace(-1.9, 1.9, pts))))))
    assert incs[0] > incs[1] > incs[2]


def test_series_function_matches_cosine_sum():
    f = builtin("series_convergent")
    theta = 0.7
    k = np.arange(2, testfns.SERIES_TRUNCATION + 1)
    direct = math.fsum(np.cos(k * theta) / (k * np.log(k)))
    assert f(2 * math.cos(theta)) == pytest.approx(direct, abs=1e-12)


def test_scaled_and_shifted():
    f = builtin("square")
    g = f.scaled(3.0)
    assert g.known_v == 18.0
    assert g(1.5) == pytest.approx(3 * 2.25)
    h = f.shifted(4.0)
    assert h.known_v == 2.0 and h(1.0) == 5.0


def test_catalog_listing():
    ids = testfns.catalog_ids()
    for fid in ("identity", "square", "step", "bump", "series_convergent", "series_divergent"):
        assert fid in ids
