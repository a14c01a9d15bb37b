import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tss.diffusion import diffuse_array
from tss.errors import CovarianceError, ModelFormatError, PredictorError, ShapeError, StepRangeError
from tss.model import TimeSeries
from tss.predictor import (
    DenoiserModel,
    EpsilonPredictor,
    GaussianDataSpec,
    GaussianOracle,
    GroundTruthPredictor,
    dump_models,
    load_models,
    oracle_predict,
    parse_models,
    save_models,
)
from tss.schedule import build_schedule


def test_oracle_identity_covariance(schedule, rng):
    spec = GaussianDataSpec.identity(2, 3)
    oracle = GaussianOracle(spec)
    for t in (1, 37, 500, 1000):
        x = TimeSeries(rng.standard_normal((2, 3)))
        expected = math.sqrt(1.0 - schedule.alpha_bar(t)) * x.values
        assert np.allclose(oracle_predict(x, t, schedule, spec).values, expected, rtol=0, atol=1e-12)
        assert np.allclose(oracle.predict(x, t, schedule).values, expected, rtol=0, atol=1e-12)


def test_oracle_matches_dense_conditional_expectation(schedule, rng):
    a = rng.standard_normal((2, 2))
    cov = a @ a.T + 0.5 * np.eye(2)
    mu = np.array([[0.3, -1.2]])
    spec = GaussianDataSpec(mu=mu, cov=cov)
    for t in (5, 300, 900):
        ab = schedule.alpha_bar(t)
        x = rng.standard_normal((1, 2))
        # E[eps | x_t] = Cov(eps, x_t) Cov(x_t)^-1 (x_t - E[x_t])
        cov_xt = ab * cov + (1.0 - ab) * np.eye(2)
        brute = math.sqrt(1.0 - ab) * np.linalg.inv(cov_xt) @ (x.reshape(-1) - math.sqrt(ab) * mu.reshape(-1))
        got = oracle_predict(TimeSeries(x), t, schedule, spec).flat()
        assert np.allclose(got, brute, rtol=0, atol=1e-10)
        assert np.allclose(GaussianOracle(spec).predict(TimeSeries(x), t, schedule).flat(), brute, rtol=0, atol=1e-10)


def test_cached_oracle_agrees_with_dense_solve(schedule, rng):
    spec = GaussianDataSpec.ar1(2, 5, rho=0.8, scale=1.3, mu=rng.standard_normal((2, 5)))
    oracle = GaussianOracle(spec)
    for t in rng.integers(1, 1001, size=20):
        x = TimeSeries(rng.standard_normal((2, 5)))
        dense = oracle_predict(x, int(t), schedule, spec).values
        assert np.allclose(oracle.predict(x, int(t), schedule).values, dense, rtol=0, atol=1e-9)


def test_ar1_covariance_structure():
    spec = GaussianDataSpec.ar1(2, 4, rho=0.9, scale=2.0)
    assert spec.cov.shape == (8, 8)
    assert spec.cov[0, 1] == pytest.approx(4.0 * 0.9)
    assert spec.cov[0, 3] == pytest.approx(4.0 * 0.9 ** 3)
    assert spec.cov[0, 4] == 0.0
    assert spec.shape == (2, 4)


def test_covariance_validation():
    with pytest.raises(CovarianceError):
        GaussianDataSpec(mu=np.zeros(2), cov=np.array([[1.0, 0.5], [0.4, 1.0]]))
    with pytest.raises(CovarianceError):
        GaussianDataSpec(mu=np.zeros(2), cov=np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(ShapeError):
        GaussianDataSpec(mu=np.zeros(3), cov=np.eye(2))
    with pytest.raises(CovarianceError):
        GaussianDataSpec.ar1(1, 4, rho=1.0)


def test_expected_mse_identity(schedule):
    oracle = GaussianOracle(GaussianDataSpec.identity(1, 3))
    assert oracle.expected_mse(schedule, t=400) == pytest.approx(schedule.alpha_bar(400))
    assert oracle.expected_mse(schedule) == pytest.approx(float(np.mean(schedule.alpha_bars)))


def test_oracle_mse_is_a_lower_bound(schedule):
    rng = np.random.default_rng(11)
    spec = GaussianDataSpec.ar1(1, 4, rho=0.9)
    oracle = GaussianOracle(spec)
    t, n = 300, 20000
    x0 = rng.standard_normal((n, 4)) @ spec.chol.T
    eps = rng.standard_normal((n, 4))
    x_t = diffuse_array(x0, t, eps, schedule)
    pred = np.stack([oracle.predict_values(row.reshape(1, 4), t, schedule).reshape(-1) for row in x_t])
    oracle_mse = float(np.mean((pred - eps) ** 2))
    assert oracle_mse == pytest.approx(oracle.expected_mse(schedule, t), rel=0.05)

    untrained = DenoiserModel.create(1, 4, schedule.T, (8,), seed=0)
    out, _ = untrained.forward(x_t, np.full(n, t))
    assert float(np.mean((out - eps) ** 2)) >= oracle_mse - 0.02


def test_ground_truth_predictor(schedule, rng):
    eps = TimeSeries(rng.standard_normal((2, 3)))
    gt = GroundTruthPredictor(eps)
    assert gt.shape == (2, 3)
    assert gt.predict(TimeSeries(rng.standard_normal((2, 3))), 17, schedule) == eps
    with pytest.raises(ShapeError):
        gt.predict(TimeSeries.zeros(2, 4), 17, schedule)
    with pytest.raises(StepRangeError):
        gt.predict(TimeSeries.zeros(2, 3), 0, schedule)


_FUZZ_SCHEDULE = build_schedule(1000)
_FUZZ_PREDICTORS = [
    GaussianOracle(GaussianDataSpec.ar1(1, 8, rho=0.9)),
    GaussianOracle(GaussianDataSpec.identity(1, 8)),
    DenoiserModel.create(1, 8, 1000, (16, 16), seed=3),
    GroundTruthPredictor(TimeSeries(np.linspace(-1.0, 1.0, 8)[np.newaxis, :])),
]


@settings(deadline=None, max_examples=60)
@given(
    arrays(np.float64, (1, 8), elements=st.floats(-1e3, 1e3, allow_nan=False)),
    st.integers(1, 1000),
    st.sampled_from(range(len(_FUZZ_PREDICTORS))),
)
def test_predictions_stay_finite(values, t, which):
    out = _FUZZ_PREDICTORS[which].predict(TimeSeries(values), t, _FUZZ_SCHEDULE)
    assert out.shape == (1, 8)
    assert np.all(np.isfinite(out.values))


class _Broken(EpsilonPredictor):
    def _predict(self, values, t, schedule):
        return np.full(values.shape, np.nan)


def test_non_finite_prediction_carries_step(schedule):
    with pytest.raises(PredictorError) as err:
        _Broken().predict(TimeSeries.zeros(1, 3), 42, schedule)
    assert err.value.step == 42


def test_model_file_round_trip(tmp_path):
    models = {
        "walking": DenoiserModel.create(2, 3, 20, (5, 4), seed=1),
        "running": DenoiserModel.create(2, 3, 20, (5, 4), seed=2),
    }
    path = save_models(tmp_path / "models.txt", models)
    loaded = load_models(path, expected_T=20)
    assert list(loaded) == ["walking", "running"]
    for label, model in models.items():
        for name, value in model.params.items():
            assert np.array_equal(loaded[label].params[name], value)
    assert loaded["walking"].hidden == (5, 4)


def test_model_file_errors(tmp_path):
    text = dump_models({"a": DenoiserModel.create(1, 2, 5, (3,), seed=0)})
    with pytest.raises(ModelFormatError, match="T=5"):
        parse_models(text, expected_T=6)
    with pytest.raises(ModelFormatError, match="format tag"):
        parse_models("garbage\n" + text)
    with pytest.raises(ModelFormatError, match="truncated"):
        parse_models("\n".join(text.splitlines()[:-1]))
    with pytest.raises(ModelFormatError):
        dump_models({"a": DenoiserModel.create(1, 2, 5, (3,)), "b": DenoiserModel.create(1, 2, 5, (4,))})
    with pytest.raises(ModelFormatError, match="does not exist"):
        load_models(tmp_path / "missing.txt")
