import numpy as np
import pytest

from somfrechet.core import ValidationError
from somfrechet.synth import (Scenario, ScenarioSpec, generate_study, generate_subject, layout,
                              make_profile, noise_sigma, noiseless_labels, signal_value)


def test_profile_peak_and_background():
    assert signal_value("signal1", 2.5) == pytest.approx(1.0, abs=1e-15)
    assert not make_profile("background", 50, 0.0).any()
    assert make_profile("signal2", 40, 0.0)[4] == pytest.approx(1.0)  # t = 5 s, period 20


def test_noise_level_monte_carlo():
    assert noise_sigma(2) == 0.5
    draws = make_profile("background", 100_000, noise_sigma(2), seed=1)
    assert abs(draws.std() - 0.5) / 0.5 < 0.02


def test_profile_preconditions():
    with pytest.raises(ValidationError):
        make_profile("signal1", 1, 0.0)
    with pytest.raises(ValidationError):
        make_profile("signal1", 10, -1.0)
    with pytest.raises(ValidationError):
        ScenarioSpec(snr=0)


def test_sc2_masks_identical():
    spec = ScenarioSpec(Scenario.SC2)
    a, b = layout(spec, "A"), layout(spec, "B")
    assert sorted(np.concatenate(list(a.values()))) == sorted(np.concatenate(list(b.values())))
    assert list(a) != list(b)


def test_sc3_profile_multiset_identical():
    spec = ScenarioSpec(Scenario.SC3)
    a, b = noiseless_labels(spec, "A"), noiseless_labels(spec, "B")
    assert sorted(a) == sorted(b)
    assert not np.array_equal(a, b)


def test_sc1_differs_in_space_and_time():
    spec = ScenarioSpec(Scenario.SC1)
    a, b = layout(spec, "A"), layout(spec, "B")
    assert set(a) != set(b)
    assert not set(a["signal1"]) & set(b["signal2"])


def test_literal_three_block_layout():
    spec = ScenarioSpec(Scenario.SC3, block=3)
    a = layout(spec, "A")
    assert sorted(a["signal1"]) == [0, 1, 2, 10, 11, 12, 20, 21, 22]
    assert sorted(a["signal2"]) == [7, 8, 9, 17, 18, 19, 27, 28, 29]
    assert sorted(layout(spec, "B")["signal2"]) == [70, 71, 72, 80, 81, 82, 90, 91, 92]


@pytest.mark.parametrize("scenario", list(Scenario))
def test_noiseless_voxels_are_canonical(scenario):
    spec = ScenarioSpec(scenario, snr=1e12)
    t = np.arange(1, 51)
    canon = {k: signal_value(k, t) for k in ("signal1", "signal2", "background")}
    for g in "AB":
        vol = generate_subject(spec, g, 0)
        for v, kind in enumerate(noiseless_labels(spec, g)):
            np.testing.assert_allclose(vol.data[v], canon[kind], atol=1e-9)


def test_default_study_shape():
    study = generate_study(ScenarioSpec())
    assert len(study.volumes) == 40
    assert {(v.V, v.T) for v in study.volumes} == {(100, 50)}
    assert study.labels.tolist() == [0] * 20 + [1] * 20


def test_study_determinism_and_seed_sensitivity():
    a = generate_study(ScenarioSpec(n_per_group=3, seed=4))
    b = generate_study(ScenarioSpec(n_per_group=3, seed=4))
    c = generate_study(ScenarioSpec(n_per_group=3, seed=5))
    assert all(x.data.tobytes() == y.data.tobytes() for x, y in zip(a.volumes, b.volumes))
    diff = np.argwhere(a.volumes[0].data != c.volumes[0].data)
    assert diff.size, "different seeds produced identical noise"
    v, t = diff[0]
    assert a.volumes[0].data[v, t] != c.volumes[0].data[v, t]


def test_subjects_have_independent_noise():
    spec = ScenarioSpec(n_per_group=2)
    assert not np.array_equal(generate_subject(spec, "A", 0).data,
                              generate_subject(spec, "A", 1).data)
    assert not np.array_equal(generate_subject(spec, "A", 0).data,
                              generate_subject(spec, "B", 0).data)
