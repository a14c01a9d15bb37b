import numpy as np
import pytest

from tss.errors import DatasetError, PredictorError, ShapeError, StaleCacheError, TrainingDivergedError
from tss.model import LabeledDataset, TimeSeries
from tss.predictor import (
    DenoiserModel,
    GaussianDataSpec,
    GaussianOracle,
    denoiser_backward,
    denoiser_forward,
    gradient_check,
    mse_loss,
    run_gradcheck,
    train,
)
from tss.predictor.gradcheck import relative_error
from tss.schedule import build_schedule


def test_parameter_layout():
    model = DenoiserModel.create(2, 4, 10, (6, 5), seed=0)
    shapes = model.param_shapes()
    assert shapes == {
        "W1": (6, 8), "b1": (6,),
        "W2": (5, 6), "b2": (5,),
        "W3": (8, 5), "b3": (8,),
        "E": (10, 6),
    }
    assert model.parameter_count == 48 + 6 + 30 + 5 + 40 + 8 + 60
    assert model.widths == (8, 6, 5, 8)


def test_zero_model_predicts_zero(small_schedule):
    model = DenoiserModel.zeros(1, 3, 50, (4,))
    out = model.predict(TimeSeries([[1.0, -2.0, 3.0]]), 7, small_schedule)
    assert np.array_equal(out.values, np.zeros((1, 3)))


def test_forward_checks_inputs():
    model = DenoiserModel.create(1, 3, 10, (4,), seed=0)
    with pytest.raises(ShapeError):
        model.forward(np.zeros((2, 4)), np.array([1, 2]))
    with pytest.raises(ShapeError):
        model.forward(np.zeros((2, 3)), np.array([1]))
    with pytest.raises(PredictorError):
        model.forward(np.zeros((1, 3)), np.array([11]))


def test_predict_rejects_schedule_with_other_T():
    model = DenoiserModel.create(1, 3, 10, (4,), seed=0)
    with pytest.raises(PredictorError, match="T=10"):
        model.predict(TimeSeries.zeros(1, 3), 5, build_schedule(20))


def test_time_embedding_changes_output():
    model = DenoiserModel.create(1, 4, 10, (6,), seed=3)
    x = np.ones((2, 4))
    out, _ = model.forward(x, np.array([1, 9]))
    assert not np.allclose(out[0], out[1])


def test_embedding_gradient_touches_only_used_rows():
    model = DenoiserModel.create(1, 4, 10, (6,), seed=3)
    out, cache = model.forward(np.ones((3, 4)), np.array([2, 2, 7]))
    grads = model.backward(cache, np.ones_like(out))
    used = np.any(grads["E"] != 0, axis=1)
    assert used.tolist() == [i in (1, 6) for i in range(10)]


def test_stale_cache_is_rejected():
    model = DenoiserModel.create(1, 4, 10, (6,), seed=3)
    out, cache = model.forward(np.ones((1, 4)), np.array([3]))
    model.apply_gradients(model.backward(cache, np.ones_like(out)), 0.01)
    with pytest.raises(StaleCacheError):
        model.backward(cache, np.ones_like(out))


def test_series_level_forward_and_backward():
    model = DenoiserModel.create(2, 3, 10, (4,), seed=5)
    x = TimeSeries(np.arange(6.0).reshape(2, 3))
    out, cache = denoiser_forward(model, x, 4)
    assert out.shape == (2, 3)
    grads = denoiser_backward(model, cache, TimeSeries(np.ones((2, 3))))
    assert set(grads) == set(model.params)
    with pytest.raises(ShapeError):
        denoiser_forward(model, TimeSeries.zeros(1, 6), 4)


def test_single_linear_layer_hand_values():
    model = DenoiserModel.zeros(1, 2, 3, hidden=())
    model.set_param("W1", [[1.0, 2.0], [3.0, 4.0]])
    model.set_param("b1", [0.5, -0.5])
    model.set_param("E", [[0.0, 0.0], [0.1, 0.2], [0.0, 0.0]])
    out, cache = model.forward(np.array([[1.0, 1.0]]), np.array([2]))
    np.testing.assert_allclose(out, [[3.6, 6.7]], rtol=0, atol=1e-12)
    grads = model.backward(cache, np.array([[1.0, -1.0]]))
    np.testing.assert_allclose(grads["W1"], [[1.0, 1.0], [-1.0, -1.0]], rtol=0, atol=0)
    np.testing.assert_allclose(grads["E"], [[0.0, 0.0], [1.0, -1.0], [0.0, 0.0]], rtol=0, atol=0)


def test_backward_is_linear_in_the_output_gradient(rng):
    model = DenoiserModel.create(2, 3, 10, (5, 4), seed=7)
    out, cache = model.forward(rng.standard_normal((3, 6)), np.array([1, 4, 10]))
    d_out = rng.standard_normal(out.shape)
    grads = model.backward(cache, d_out)
    doubled = model.backward(cache, 2.0 * d_out)
    zero = model.backward(cache, np.zeros_like(out))
    for name in model.params:
        np.testing.assert_allclose(doubled[name], 2.0 * grads[name], rtol=1e-12, atol=1e-14)
        assert not np.any(zero[name])


def test_mse_loss_and_gradient():
    out = np.array([[1.0, 2.0], [3.0, 4.0]])
    target = np.zeros((2, 2))
    loss, grad = mse_loss(out, target)
    assert loss == pytest.approx(7.5)
    assert np.allclose(grad, out / 2.0)


def test_relative_error_floor():
    assert relative_error(np.array([1e-9]), np.array([0.0]))[0] == pytest.approx(1e-4)
    assert relative_error(np.array([2.0]), np.array([1.0]))[0] == pytest.approx(0.5)


def test_single_model_gradient_check(rng):
    model = DenoiserModel.create(1, 3, 6, (4, 3), seed=9)
    X = rng.standard_normal((2, 3))
    target = rng.standard_normal((2, 3))
    assert gradient_check(model, X, np.array([2, 5]), target) < 1e-4


def test_gradcheck_over_five_random_models():
    report = run_gradcheck(models=5, probes=10, seed=0)
    assert len(report.errors) == 5
    assert report.max_rel_err < 1e-4
    assert all(c == report.parameter_counts[0] for c in report.parameter_counts)


def test_training_reaches_oracle_loss():
    # one-step schedule with alpha_bar = 0.5 on N(0, I): the best achievable loss is 0.5
    schedule = build_schedule(1, 0.5, 0.5)
    spec = GaussianDataSpec.identity(1, 2)
    data = [TimeSeries(row.reshape(1, 2)) for row in np.random.default_rng(4).standard_normal((2000, 2))]
    model = DenoiserModel.create(1, 2, 1, (16,), seed=1)
    log = train(model, data, schedule, steps=3000, learning_rate=0.05, seed=2, batch_size=64)
    oracle_mse = GaussianOracle(spec).expected_mse(schedule)
    assert oracle_mse == pytest.approx(0.5)
    assert log.window_mean(0, 100) > log.window_mean(2500, 3000)
    assert oracle_mse - 0.05 <= log.window_mean(2500, 3000) < oracle_mse + 0.1


def test_training_is_deterministic_per_seed(small_schedule):
    data = [TimeSeries(np.sin(np.arange(8.0) + k)) for k in range(6)]
    a = DenoiserModel.create(1, 8, 50, (6,), seed=1)
    b = a.copy()
    la = train(a, data, small_schedule, 40, 0.05, seed=3)
    lb = train(b, data, small_schedule, 40, 0.05, seed=3)
    assert la.losses == lb.losses
    assert all(np.array_equal(a.params[k], b.params[k]) for k in a.params)


def test_zero_training_steps_leave_the_model_alone(small_schedule):
    model = DenoiserModel.create(1, 4, 50, (3,), seed=2)
    before, version = model.copy(), model.version
    log = train(model, [TimeSeries(np.ones((1, 4)))], small_schedule, 0, 0.1, seed=0)
    assert len(log) == 0
    assert model.version == version
    assert all(np.array_equal(model.params[k], before.params[k]) for k in model.params)


def test_training_accepts_a_labeled_dataset(small_schedule):
    samples = [TimeSeries(np.cos(np.arange(4.0) * k)) for k in range(4)]
    dataset = LabeledDataset(samples, [0, 0, 1, 1], {0: "a", 1: "b"})
    log = train(DenoiserModel.create(1, 4, 50, (3,)), dataset, small_schedule, 5, 0.01, seed=0)
    assert len(log) == 5


def test_training_divergence_is_reported(small_schedule):
    data = [TimeSeries(10.0 * np.ones((1, 4)))]
    model = DenoiserModel.create(1, 4, 50, (4,), seed=0)
    with np.errstate(all="ignore"):
        with pytest.raises(TrainingDivergedError) as err:
            train(model, data, small_schedule, steps=500, learning_rate=1e8, seed=0)
    assert err.value.step >= 1


def test_training_rejects_mismatched_inputs(small_schedule):
    model = DenoiserModel.create(1, 4, 50, (4,))
    with pytest.raises(PredictorError):
        train(model, [TimeSeries.zeros(1, 4)], build_schedule(10), 1, 0.1, 0)
    with pytest.raises(DatasetError):
        train(model, [TimeSeries.zeros(1, 5)], small_schedule, 1, 0.1, 0)
