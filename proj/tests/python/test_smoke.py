"""Smoke tests for the acil Python module against plain numpy solves."""

import os
import pathlib

import numpy as np
import pytest

import acil


def ridge(x, y, gamma):
    return np.linalg.solve(x.T @ x + gamma * np.eye(x.shape[1]), x.T @ y)


@pytest.fixture
def phases():
    rng = np.random.default_rng(7)
    exp = acil.make_expander(8, 32, seed=3)
    out = []
    next_class = 0
    for n, k in [(40, 3), (12, 2), (0, 0), (25, 2)]:
        ids = list(range(next_class, next_class + k))
        next_class += k
        labels = [ids[i % k] for i in range(n)] if k else []
        x = acil.expand(exp, rng.standard_normal((n, 8)))
        out.append((x, acil.one_hot(labels, ids), ids))
    return out


def test_recursive_matches_joint_and_numpy(phases):
    gamma = 0.1
    x0, y0, ids0 = phases[0]
    state = acil.fit_base(x0, y0, ids0, gamma)
    for x, y, ids in phases[1:]:
        state = acil.update_phase(state, x, y, ids, chunk_size=5)
    assert state.phase_count == 3

    w, ids = acil.joint_fit(phases, gamma)
    report = acil.compare_states(w, ids, state, 1e-8)
    assert report["passed"], report

    x = np.vstack([p[0] for p in phases])
    y = np.zeros((x.shape[0], len(ids)))
    r = c = 0
    for px, py, _ in phases:
        y[r:r + px.shape[0], c:c + py.shape[1]] = py
        r += px.shape[0]
        c += py.shape[1]
    np.testing.assert_allclose(state.weights, ridge(x, y, gamma), atol=1e-8)
    np.testing.assert_allclose(state.autocorrelation, np.linalg.inv(x.T @ x + gamma * np.eye(x.shape[1])), atol=1e-8)

    classes, scores = acil.predict(state, x)
    assert list(classes) == [state.class_registry[i] for i in np.argmax(scores, axis=1)]


def test_save_load_roundtrip(phases):
    x0, y0, ids0 = phases[0]
    state = acil.fit_base(x0, y0, ids0, 0.5)
    blob = acil.save_state(state)
    back = acil.load_state(blob)
    np.testing.assert_array_equal(back.weights, state.weights)
    np.testing.assert_array_equal(back.autocorrelation, state.autocorrelation)
    corrupt = bytearray(blob)
    corrupt[len(corrupt) // 2] ^= 0xFF
    with pytest.raises(ValueError):
        acil.load_state(bytes(corrupt))


def test_validation_errors_map_to_value_error(phases):
    x0, y0, ids0 = phases[0]
    with pytest.raises(ValueError):
        acil.fit_base(x0, y0, ids0, -1.0)
    with pytest.raises(ValueError):
        acil.fit_base(x0[:5], y0, ids0, 0.1)


def test_metrics():
    assert acil.phase_accuracy([1, 2, 3, 4], [1, 2, 3, 9]) == 0.75
    assert acil.average_incremental_accuracy([0.8, 0.6], [0.8, 0.6]) == pytest.approx(0.7)
    signed, magnitude = acil.forgetting_rate([0.9, 0.8], [0.9, 0.8])
    assert signed == pytest.approx(-0.1) and magnitude == pytest.approx(0.1)


def test_run_and_verify_experiment(tmp_path):
    data = pathlib.Path(os.environ.get("ACIL_DATA_DIR", pathlib.Path(__file__).parents[2] / "data")) / "digits"
    cfg = tmp_path / "digits.cfg"
    cfg.write_text(
        f"features = {data / 'features.bin'}\nlabels = {data / 'labels.txt'}\n"
        f"phases = 3\nd_fe = 128\ngamma = 0.1\noutput_dir = {tmp_path / 'out'}\n"
    )
    report = acil.run_experiment(str(cfg), ["d_fe=256"])
    assert report["config"]["d_fe"] == 256
    assert len(report["phases"]) == 4
    assert 0.5 < report["average_accuracy"] <= 1.0
    assert (tmp_path / "out" / "state.bin").exists()

    verdict = acil.verify_experiment(str(cfg))
    assert verdict["passed"]
    assert not acil.verify_experiment(str(cfg), tol=0.0)["passed"]
