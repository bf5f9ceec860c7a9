# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the compiled beamsched extension."""

import math

import numpy as np
import pytest

import beamsched as bs


def test_codebook_is_unitary():
    a = bs.dft_codebook(16)
    assert np.allclose(a.conj().T @ a, np.eye(16), atol=1e-10)


def test_steering_vector_norm_and_broadside():
    v = bs.steering_vector(0.0, 4)
    assert np.allclose(v, 0.5)
    assert math.isclose(np.linalg.norm(bs.steering_vector(0.7, 64)), 1.0, abs_tol=1e-12)
    with pytest.raises(ValueError):
        bs.steering_vector(2.0, 4)


def test_beta_table_monotone():
    betas = [bs.beta_for_bits(b) for b in range(1, 13)]
    assert all(hi > lo for hi, lo in zip(betas, betas[1:]))
    assert math.isclose(betas[0], 1.0 - 2.0 / math.pi, rel_tol=1e-9)
    params = bs.AqnmParams.from_bits(3)
    assert params.alpha + params.beta == 1.0


def test_channel_and_rates_round_trip():
    rng = bs.Rng(7)
    cols = [bs.draw_user_channel(rng, 16, 4).antenna_vector for _ in range(3)]
    h = bs.to_beamspace(np.column_stack(cols), bs.dft_codebook(16))
    params = bs.AqnmParams.from_bits(2)

    report = bs.sum_rate(h, 2.0, params)
    assert report.sum == pytest.approx(sum(report.per_user))
    assert all(r > 0 for r in report.per_user)

    w = bs.zf_combiner(h)
    assert np.allclose(w.conj().T @ h, np.eye(3), atol=1e-8)


def test_closed_form_matches_equal_spread():
    rng = bs.Rng(3)
    spec = bs.VirtualChannelSpec()
    spec.support = [1, 4, 7, 10]
    spec.norm_sq = 5.0
    spec.spread = bs.PowerSpread.equal
    spec.num_beams = 16
    h = bs.make_virtual_channel(spec, rng).reshape(-1, 1)
    params = bs.AqnmParams.from_bits(2)
    expected = bs.closed_form_single_user_rate(5.0, 4, 2.0, params.alpha)
    assert bs.user_rate(h, 0, 2.0, params) == pytest.approx(expected, abs=1e-10)


def test_schedulers_agree_with_exhaustive_on_tiny_instance():
    rng = bs.Rng(11)
    cols = [bs.draw_user_channel(rng, 16, 4).antenna_vector for _ in range(6)]
    h = bs.to_beamspace(np.column_stack(cols), bs.dft_codebook(16))

    cfg = bs.SystemConfig()
    cfg.num_antennas = 16
    cfg.num_users = 6
    cfg.num_scheduled = 2
    cfg.num_paths = 4
    cfg.num_stored_beams = 8
    cfg.transmit_power = 2.0
    cfg.ortho_threshold = 0.75
    cfg.beam_overlap_limit = 6
    params = bs.AqnmParams.from_bits(2)

    best = bs.schedule_exhaustive(h, cfg, params)
    greedy = bs.schedule_greedy(h, cfg, params)
    css = bs.schedule_css(h, cfg, params)
    assert greedy.rates.sum <= best.rates.sum + 1e-9
    assert css.rates.sum <= best.rates.sum + 1e-9
    assert len(set(greedy.selected)) == 2


def test_sweep_is_deterministic_and_emits_csv(tmp_path):
    spec = bs.SweepSpec()
    spec.base_config.num_antennas = 16
    spec.base_config.num_users = 10
    spec.base_config.num_scheduled = 3
    spec.rho_grid_db = [0.0, 10.0]
    spec.bits_grid = [2]
    spec.trials = 3
    spec.algorithms = ["css", "random"]
    spec.master_seed = 42

    first = bs.run_sweep(spec)
    second = bs.run_sweep(spec)
    assert [r.sum_rate for r in first.rows] == [r.sum_rate for r in second.rows]
    assert len(first.rows) == 2 * 2 * 3

    out = tmp_path / "sweep.csv"
    bs.emit_csv(first, str(out))
    lines = out.read_text().splitlines()
    assert lines[0] == "algorithm,rho_db,bits,trial,sum_rate,num_selected,candidate_sizes"
    assert len(lines) == 1 + len(first.rows)


def test_figure_presets():
    fig3 = bs.figure_preset("fig3")
    assert fig3.bits_grid == [1, 2, 3, 4, 5, 6, 7, 8, 9]
    assert fig3.n_ol_overrides[9] == 5
    with pytest.raises(ValueError):
        bs.figure_preset("not-a-preset")
