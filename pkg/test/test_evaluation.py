from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tss.data import gen_cyclic_classes, gen_gaussian
from tss.diffusion import Trajectory, ddim_sample, diffuse, sawtooth_sample
from tss.errors import DatasetError, ShapeError
from tss.evaluation import (
    SimilarityScore,
    SpectralIndex,
    StepCurve,
    mean_curve,
    nearest_real_match,
    per_step_curve,
    periodogram,
    psd_similarity,
    tstr_evaluate,
    tstr_run,
)
from tss.evaluation.tstr import confusion_matrix, geometric_mean_recall, macro_f1
from tss.model import LabeledDataset, TimeSeries
from tss.predictor import GaussianDataSpec, GaussianOracle, GroundTruthPredictor
from tss.schedule import single_pass_plan

FIXTURES = Path(__file__).resolve().parents[1] / "resources" / "fixtures"


def _sine(freq, length=32, phase=0.0, amplitude=1.0):
    t = np.arange(length)
    return amplitude * np.sin(2 * np.pi * freq * t / length + phase)


def test_sinusoid_spectrum_is_a_single_bin():
    p = periodogram(TimeSeries(_sine(5)))
    assert p.shape == (1, 17)
    assert int(np.argmax(p[0])) == 5
    assert p[0, 5] == pytest.approx(1.0, abs=1e-12)


def test_constant_spectrum_is_all_dc():
    p = periodogram(TimeSeries(np.full((2, 16), 3.0)))
    assert np.allclose(p[:, 0], 1.0)
    assert np.allclose(p[:, 1:], 0.0)


def test_white_noise_spectrum_is_flat():
    rng = np.random.default_rng(7)
    spectra = [periodogram(TimeSeries(rng.standard_normal(64)))[0] for _ in range(4000)]
    mean = np.mean(spectra, axis=0)
    assert np.max(np.abs(mean - 1.0 / 33)) < 0.005


def test_zero_signal_maps_to_uniform_spectrum():
    p = periodogram(TimeSeries.zeros(1, 8))
    assert np.allclose(p, 1.0 / 5)


def test_similarity_examples():
    x = TimeSeries(_sine(3) + 0.3 * _sine(7))
    assert psd_similarity(x, x).value == 1.0
    assert psd_similarity(TimeSeries(_sine(2)), TimeSeries(_sine(5))).value == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ShapeError):
        psd_similarity(x, TimeSeries.zeros(1, 16))


def test_similarity_decreases_with_noise():
    rng = np.random.default_rng(2)
    base = _sine(4, length=64)
    means = []
    for level in (0.1, 0.5, 2.0):
        scores = [psd_similarity(TimeSeries(base), TimeSeries(base + level * rng.standard_normal(64))).value
                  for _ in range(200)]
        means.append(np.mean(scores))
    assert 0.0 < means[2] < means[1] < means[0] < 1.0


def test_score_range_is_enforced():
    with pytest.raises(ValueError):
        SimilarityScore(1.5)


_series = st.tuples(st.integers(1, 3), st.integers(2, 24)).flatmap(
    lambda shape: st.tuples(
        arrays(np.int64, shape, elements=st.integers(-1000, 1000)),
        arrays(np.int64, shape, elements=st.integers(-1000, 1000)),
    )
)


@settings(deadline=None, max_examples=150)
@given(_series, st.floats(0.01, 100.0), st.booleans())
def test_similarity_properties(pair, c, negate):
    a = TimeSeries(pair[0] / 10.0)
    b = TimeSeries(pair[1] / 10.0)
    ab = psd_similarity(a, b).value
    assert 0.0 <= ab <= 1.0
    assert ab == psd_similarity(b, a).value
    assert psd_similarity(a, a).value == 1.0
    scale = -c if negate else c
    assert psd_similarity(a, TimeSeries(scale * a.values)).value == pytest.approx(1.0, abs=1e-9)


def test_nearest_match_examples():
    rng = np.random.default_rng(4)
    real = [TimeSeries(rng.standard_normal((1, 16))) for _ in range(6)]
    index, score = nearest_real_match(real[3], real)
    assert index == 3 and score.value == 1.0
    assert nearest_real_match(real[0], real[:1])[0] == 0
    with pytest.raises(DatasetError):
        nearest_real_match(real[0], [])


def test_nearest_match_breaks_ties_by_lowest_index():
    a = TimeSeries(_sine(2, 16))
    b = TimeSeries(_sine(5, 16))
    real = [b, a, b, a]
    assert nearest_real_match(a, real)[0] == 1
    # a scaled copy has the same spectrum
    assert nearest_real_match(TimeSeries(2.0 * a.values), real)[0] == 1


def test_nearest_match_is_exhaustive_under_permutation():
    rng = np.random.default_rng(5)
    real = [TimeSeries(rng.standard_normal((2, 12))) for _ in range(9)]
    query = TimeSeries(rng.standard_normal((2, 12)))
    brute = int(np.argmax([psd_similarity(query, r).value for r in real]))
    assert nearest_real_match(query, real)[0] == brute
    perm = rng.permutation(9)
    assert perm[nearest_real_match(query, [real[i] for i in perm])[0]] == brute


def test_curve_of_empty_trajectory():
    x = TimeSeries.zeros(1, 4)
    assert len(per_step_curve(Trajectory(initial=x, final=x), [x])) == 0


def test_curve_needs_recorded_states(schedule):
    oracle = GaussianOracle(GaussianDataSpec.identity(1, 8))
    traj = ddim_sample(TimeSeries.zeros(1, 8), oracle, single_pass_plan(1000, 4), schedule, record_states=False)
    with pytest.raises(DatasetError):
        per_step_curve(traj, [TimeSeries.zeros(1, 8)])


def test_sawtooth_curve_structure(schedule, k2_plan):
    spec = GaussianDataSpec.ar1(1, 16, rho=0.9)
    real = gen_gaussian(spec, 10, seed=1)
    traj = sawtooth_sample(TimeSeries(np.random.default_rng(0).standard_normal((1, 16))),
                           GaussianOracle(spec), schedule, k2_plan)
    curve = per_step_curve(traj, real.samples)
    assert len(curve) == 100
    assert curve.iterations == [1] * 50 + [2] * 50
    assert [p.step for p in curve.points] == list(range(1, 101))
    assert all(0.0 <= s <= 1.0 for s in curve.scores)
    lines = curve.dump().splitlines()
    assert lines[:2] == ["# tss-curve v1", "step,iteration,score,match_id"]
    assert len(lines) == 102


def test_ground_truth_curve_ends_at_a_perfect_match(schedule, rng):
    x0 = TimeSeries(rng.standard_normal((2, 16)))
    eps = TimeSeries(rng.standard_normal((2, 16)))
    others = [TimeSeries(rng.standard_normal((2, 16))) for _ in range(4)]
    traj = ddim_sample(diffuse(x0, 1000, eps, schedule), GroundTruthPredictor(eps), single_pass_plan(1000, 50), schedule)
    curve = per_step_curve(traj, SpectralIndex(others[:2] + [x0] + others[2:]))
    last = curve.points[-1]
    assert last.match_id == 2
    assert last.score == pytest.approx(1.0, abs=1e-9)


def test_two_tone_sawtooth_curve_matches_golden_file(schedule, k2_plan):
    # every state stays a mix of the two tones, so the curve has a closed form
    x0 = TimeSeries(_sine(2, length=16)[None, :])
    eps = TimeSeries(_sine(5, length=16)[None, :])
    traj = sawtooth_sample(diffuse(x0, 1000, eps, schedule), GroundTruthPredictor(eps), schedule, k2_plan)
    curve = per_step_curve(traj, [x0, eps])
    golden = StepCurve.loads((FIXTURES / "curve_k2_two_tone.csv").read_text())
    assert len(golden) == 100
    assert [(p.step, p.iteration, p.match_id) for p in curve.points] == \
        [(p.step, p.iteration, p.match_id) for p in golden.points]
    np.testing.assert_allclose(curve.scores, golden.scores, rtol=0, atol=1e-9)


def test_curve_file_errors():
    with pytest.raises(DatasetError, match="header"):
        StepCurve.loads("step,iteration,score,match_id\n1,1,0.5,0\n")
    with pytest.raises(DatasetError, match="malformed") as err:
        StepCurve.loads("# tss-curve v1\nstep,iteration,score,match_id\n1,1,0.5,0\n2,1,abc,0\n")
    assert err.value.line == 4


def test_mean_curve(schedule, k2_plan):
    spec = GaussianDataSpec.ar1(1, 16, rho=0.9)
    real = gen_gaussian(spec, 5, seed=1).samples
    oracle = GaussianOracle(spec)
    curves = [
        per_step_curve(sawtooth_sample(TimeSeries(np.random.default_rng(s).standard_normal((1, 16))), oracle,
                                       schedule, k2_plan), real)
        for s in range(3)
    ]
    mean = mean_curve(curves)
    assert len(mean) == 100
    assert mean.points[0].match_id == -1
    assert np.allclose(mean.scores, np.mean([c.scores for c in curves], axis=0))
    assert len(mean_curve([])) == 0


def test_tstr_identical_separable_sets():
    data = gen_cyclic_classes(4, 1, 32, 5, 0.0, seed=0)
    assert tstr_evaluate(data, data, "macro_f1") == 1.0
    assert tstr_evaluate(data, data, "gmean") == 1.0


def test_tstr_real_on_real_is_separable():
    train = gen_cyclic_classes(4, 2, 64, 20, 0.05, seed=1)
    test = gen_cyclic_classes(4, 2, 64, 20, 0.05, seed=2)
    result = tstr_run(train, test)
    assert result.macro_f1 == 1.0
    assert result.chance == 0.25
    assert result.confusion.trace() == 80


def test_single_class_predictor_has_zero_gmean():
    cm = confusion_matrix([0] * 5 + [1] * 5, [0] * 10, [0, 1])
    assert cm.tolist() == [[5, 0], [5, 0]]
    assert geometric_mean_recall(cm) == 0.0
    assert macro_f1(cm) == pytest.approx((10 / 15 + 0.0) / 2)


def test_hand_built_three_class_metrics():
    cm = np.array([[3, 1, 0], [0, 2, 2], [1, 0, 3]])
    f1 = [6 / 8, 4 / 7, 6 / 9]
    assert macro_f1(cm) == pytest.approx(sum(f1) / 3)
    assert geometric_mean_recall(cm) == pytest.approx((0.75 * 0.5 * 0.75) ** (1 / 3))


def test_tstr_errors():
    train = gen_cyclic_classes(2, 1, 32, 3, 0.0, seed=0)
    other = gen_cyclic_classes(3, 1, 32, 3, 0.0, seed=0)
    with pytest.raises(DatasetError, match="absent"):
        tstr_run(train, other)
    single = LabeledDataset(train.of_class(0), [0, 0, 0], {0: "walking"})
    with pytest.raises(DatasetError):
        tstr_run(single, train)
    with pytest.raises(ValueError):
        tstr_evaluate(train, train, "accuracy")
