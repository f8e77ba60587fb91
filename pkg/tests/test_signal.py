"""Tests for scenario handling, snapshot simulation, extended covariance,
and virtual-array observation."""

from __future__ import annotations

import json
import struct

import numpy as np
import pytest

from coarraylab import coarray, coupling, geometry, signal
from coarraylab.signal import (
    ExtendedCovariance,
    Scenario,
    SNAPSHOT_MAGIC,
    exact_extended_covariance,
    extended_covariance,
    extended_lag_matrix,
    load_scenario,
    read_snapshots,
    simulate_snapshots,
    steering_matrix,
    steering_vector,
    trial_rng,
    virtual_observation,
    write_snapshots,
)


# ---------------------------------------------------------------------------
# Scenario validation and serialization
# ---------------------------------------------------------------------------


def test_scenario_defaults():
    sc = Scenario(angles_deg=(10.0, -20.0), snapshots=100)
    assert sc.num_sources == 2
    assert sc.powers == (1.0, 1.0)
    assert sc.nc_phases == (0.0, 0.0)
    assert sc.snr_db == 0.0
    assert sc.seed == 0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"angles_deg": (), "snapshots": 10},
        {"angles_deg": (95.0,), "snapshots": 10},
        {"angles_deg": (90.0,), "snapshots": 10},
        {"angles_deg": (-90.0,), "snapshots": 10},
        {"angles_deg": (10.0, 10.0), "snapshots": 10},
        {"angles_deg": (10.0,), "snapshots": 0},
        {"angles_deg": (10.0,), "snapshots": 10, "powers": (1.0, 2.0)},
        {"angles_deg": (10.0,), "snapshots": 10, "powers": (-0.5,)},
        {"angles_deg": (10.0,), "snapshots": 10, "nc_phases": (0.0, 0.1)},
    ],
)
def test_scenario_rejects_bad_inputs(kwargs):
    with pytest.raises(ValueError):
        Scenario(**kwargs)


def test_scenario_allows_zero_power_source():
    sc = Scenario(angles_deg=(10.0, 20.0), snapshots=10, powers=(1.0, 0.0))
    assert sc.powers == (1.0, 0.0)


@pytest.mark.parametrize(
    ("snr_db", "expected"),
    [(0.0, 1.0), (10.0, 0.1), (-10.0, 10.0), (None, 0.0), (float("inf"), 0.0)],
)
def test_noise_power_rule(snr_db, expected):
    sc = Scenario(angles_deg=(5.0,), snapshots=10, snr_db=snr_db)
    assert sc.noise_power == pytest.approx(expected, rel=1e-15)


def test_scenario_dict_round_trip():
    sc = Scenario(
        angles_deg=(-30.0, 0.5, 44.0),
        snapshots=512,
        snr_db=7.5,
        powers=(1.0, 0.5, 2.0),
        nc_phases=(0.0, 0.1, -0.2),
        seed=99,
    )
    assert Scenario.from_dict(sc.to_dict()) == sc


def test_scenario_from_dict_requires_core_fields():
    with pytest.raises(ValueError):
        Scenario.from_dict({"angles_deg": [1.0]})
    with pytest.raises(ValueError):
        Scenario.from_dict([1, 2, 3])


def test_load_scenario_plain(tmp_path):
    path = tmp_path / "sc.json"
    path.write_text(json.dumps({"angles_deg": [3.0, -8.0], "snapshots": 64}))
    sc, model = load_scenario(path)
    assert sc.angles_deg == (3.0, -8.0)
    assert model is None


def test_load_scenario_with_preset_coupling(tmp_path):
    path = tmp_path / "sc.json"
    path.write_text(
        json.dumps(
            {"angles_deg": [3.0], "snapshots": 64, "coupling": "paper-v"}
        )
    )
    _, model = load_scenario(path)
    assert model == coupling.PAPER_V


def test_load_scenario_with_inline_coupling(tmp_path):
    path = tmp_path / "sc.json"
    path.write_text(
        json.dumps(
            {
                "angles_deg": [3.0],
                "snapshots": 64,
                "coupling": {"c1_magnitude": 0.2, "band_limit": 4},
            }
        )
    )
    _, model = load_scenario(path)
    assert model.c1_magnitude == 0.2
    assert model.band_limit == 4


def test_load_scenario_rejects_garbage(tmp_path):
    path = tmp_path / "sc.json"
    path.write_text("{not json")
    with pytest.raises(ValueError):
        load_scenario(path)
    path.write_text(json.dumps({"angles_deg": [3.0], "snapshots": 64, "coupling": "nope"}))
    with pytest.raises(ValueError):
        load_scenario(path)


# ---------------------------------------------------------------------------
# Steering vectors
# ---------------------------------------------------------------------------


def test_steering_vector_closed_form_at_30_degrees():
    arr = geometry.from_positions("pair", [0, 1])
    a = steering_vector(arr, 30.0)
    np.testing.assert_allclose(a, [1.0, -1.0j], atol=1e-12)


def test_steering_vector_at_broadside_is_all_ones():
    arr = geometry.design_aulas(12)
    np.testing.assert_array_equal(steering_vector(arr, 0.0), np.ones(12))


def test_steering_vector_has_unit_modulus():
    arr = geometry.design_tsaulas(9)
    a = steering_vector(arr, -37.25)
    np.testing.assert_allclose(np.abs(a), 1.0, rtol=1e-14)


def test_steering_vector_rejects_endfire():
    arr = geometry.design_ula(4)
    with pytest.raises(ValueError):
        steering_vector(arr, 90.0)
    with pytest.raises(ValueError):
        steering_vector(arr, -93.0)


def test_steering_matrix_columns_match_vectors():
    arr = geometry.design_saulas(9)
    angles = [-41.0, 2.5, 60.0]
    a = steering_matrix(arr, angles)
    assert a.shape == (9, 3)
    for z, angle in enumerate(angles):
        np.testing.assert_array_equal(a[:, z], steering_vector(arr, angle))


# ---------------------------------------------------------------------------
# RNG streams and snapshot simulation
# ---------------------------------------------------------------------------


def test_trial_rng_is_reproducible_and_trial_dependent():
    a = trial_rng(7, 3).standard_normal(8)
    b = trial_rng(7, 3).standard_normal(8)
    c = trial_rng(7, 4).standard_normal(8)
    d = trial_rng(8, 3).standard_normal(8)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_simulate_snapshots_shape_and_determinism():
    arr = geometry.design_aulas(9)
    sc = Scenario(angles_deg=(10.0, -25.0), snapshots=50, seed=5)
    x1 = simulate_snapshots(arr, sc)
    x2 = simulate_snapshots(arr, sc)
    assert x1.shape == (9, 50)
    assert np.iscomplexobj(x1)
    np.testing.assert_array_equal(x1, x2)
    x3 = simulate_snapshots(arr, sc, trial=1)
    assert not np.array_equal(x1, x3)


def test_noiseless_coupling_is_left_multiplication():
    arr = geometry.design_saulas(12)
    sc = Scenario(angles_deg=(10.0, -25.0), snapshots=40, snr_db=None, seed=3)
    clean = simulate_snapshots(arr, sc)
    coupled = simulate_snapshots(arr, sc, coupling=coupling.PAPER_V)
    c = coupling.coupling_matrix(arr, coupling.PAPER_V)
    np.testing.assert_allclose(coupled, c @ clean, rtol=1e-12)


def test_zero_power_source_does_not_add_rank():
    arr = geometry.design_aulas(9)
    sc = Scenario(
        angles_deg=(10.0, -25.0), snapshots=60, snr_db=None, powers=(1.0, 0.0)
    )
    x = simulate_snapshots(arr, sc)
    s = np.linalg.svd(x, compute_uv=False)
    assert s[0] > 1.0
    assert s[1] < 1e-12 * s[0]


def test_sources_are_strictly_non_circular():
    # One noiseless source: every snapshot is a real multiple of the same
    # fixed complex vector, so rotating that vector away leaves real data.
    arr = geometry.design_tsaulas(9)
    phi = 0.7
    sc = Scenario(
        angles_deg=(33.0,), snapshots=200, snr_db=None, nc_phases=(phi,), seed=11
    )
    x = simulate_snapshots(arr, sc)
    v = np.exp(1j * phi) * steering_vector(arr, 33.0)
    ratios = x / v[:, None]
    np.testing.assert_allclose(ratios.imag, 0.0, atol=1e-13)
    assert np.allclose(ratios, ratios[0][None, :], rtol=1e-12, atol=1e-13)


def test_sample_covariance_converges_to_ensemble_covariance():
    arr = geometry.design_saulas(9)
    sc = Scenario(
        angles_deg=(12.0, -31.0),
        snapshots=200_000,
        snr_db=10.0,
        nc_phases=(0.3, -0.9),
        seed=17,
    )
    sample = extended_covariance(simulate_snapshots(arr, sc))
    exact = exact_extended_covariance(arr, sc)
    for got, want in ((sample.r_s, exact.r_s), (sample.r_hat, exact.r_hat)):
        rel = np.linalg.norm(got - want) / np.linalg.norm(want)
        assert rel < 0.02


# ---------------------------------------------------------------------------
# Extended covariance
# ---------------------------------------------------------------------------


def test_extended_covariance_blocks_and_stack():
    arr = geometry.design_aulas(9)
    sc = Scenario(angles_deg=(10.0,), snapshots=32, seed=2)
    ec = extended_covariance(simulate_snapshots(arr, sc))
    assert ec.n == 9
    r_so = ec.r_so
    assert r_so.shape == (18, 18)
    np.testing.assert_array_equal(r_so[:9, :9], ec.r_s)
    np.testing.assert_array_equal(r_so[:9, 9:], ec.r_hat)
    np.testing.assert_array_equal(r_so[9:, :9], np.conj(ec.r_hat))
    np.testing.assert_array_equal(r_so[9:, 9:], np.conj(ec.r_s))
    # the stacked matrix is Hermitian
    np.testing.assert_allclose(r_so, r_so.conj().T, atol=1e-13)


def test_extended_covariance_rejects_bad_shapes():
    with pytest.raises(ValueError):
        extended_covariance(np.zeros(5, dtype=complex))
    with pytest.raises(ValueError):
        ExtendedCovariance(r_s=np.eye(3), r_hat=np.eye(4))


def test_exact_extended_covariance_single_source():
    arr = geometry.design_aulas(9)
    phi = 0.4
    sc = Scenario(
        angles_deg=(25.0,), snapshots=10, snr_db=3.0, powers=(2.0,), nc_phases=(phi,)
    )
    ec = exact_extended_covariance(arr, sc)
    a = steering_vector(arr, 25.0)
    want_rs = 2.0 * np.outer(a, a.conj()) + sc.noise_power * np.eye(9)
    want_rh = 2.0 * np.exp(2j * phi) * np.outer(a, a)
    np.testing.assert_allclose(ec.r_s, want_rs, atol=1e-14)
    np.testing.assert_allclose(ec.r_hat, want_rh, atol=1e-14)


# ---------------------------------------------------------------------------
# Virtual-array observation
# ---------------------------------------------------------------------------


def test_extended_lag_matrix_spans_sum_difference_coarray():
    for arr in (
        geometry.design_aulas(9),
        geometry.design_tsaulas(12),
        geometry.from_positions("probe", [3, 6, 9, 10, 12]),
    ):
        lags = np.unique(extended_lag_matrix(arr))
        np.testing.assert_array_equal(lags, coarray.sum_difference_coarray(arr))


def test_virtual_observation_lag_axis():
    arr = geometry.design_saulas(12)
    sc = Scenario(angles_deg=(10.0,), snapshots=16, seed=1)
    vo = virtual_observation(extended_covariance(simulate_snapshots(arr, sc)), arr)
    # SAULAs with 12 sensors: 189 contiguous lags, half-width 94
    assert vo.half_width == 94
    np.testing.assert_array_equal(vo.lags, np.arange(-94, 95))
    assert vo.values.shape == (189,)


def test_virtual_observation_from_ensemble_covariance_is_pure_phase():
    arr = geometry.design_saulas(12)
    theta = 20.0
    sc = Scenario(angles_deg=(theta,), snapshots=10, snr_db=None)
    vo = virtual_observation(exact_extended_covariance(arr, sc), arr)
    expected = np.exp(-1j * np.pi * vo.lags * np.sin(np.deg2rad(theta)))
    np.testing.assert_allclose(vo.values, expected, atol=1e-12)


def test_virtual_observation_conjugate_symmetry():
    arr = geometry.design_aulas(9)
    sc = Scenario(angles_deg=(5.0, -40.0), snapshots=300, seed=8)
    vo = virtual_observation(extended_covariance(simulate_snapshots(arr, sc)), arr)
    scale = np.abs(vo.values).max()
    np.testing.assert_allclose(
        vo.values, np.conj(vo.values[::-1]), atol=1e-13 * scale
    )


def test_virtual_observation_zero_lag_is_real_average_power():
    arr = geometry.design_saulas(12)  # no sensor pair straddles zero
    sc = Scenario(angles_deg=(5.0, -40.0), snapshots=128, seed=8)
    ec = extended_covariance(simulate_snapshots(arr, sc))
    vo = virtual_observation(ec, arr)
    zero = vo.value_at(0)
    assert zero.imag == 0.0
    assert zero.real == pytest.approx(np.mean(np.diag(ec.r_s).real), rel=1e-12)


def test_virtual_observation_value_at_bounds():
    arr = geometry.design_aulas(9)
    sc = Scenario(angles_deg=(5.0,), snapshots=16)
    vo = virtual_observation(extended_covariance(simulate_snapshots(arr, sc)), arr)
    with pytest.raises(ValueError):
        vo.value_at(vo.half_width + 1)
    with pytest.raises(ValueError):
        vo.value_at(-vo.half_width - 1)


def test_virtual_observation_rejects_size_mismatch():
    arr = geometry.design_aulas(9)
    other = geometry.design_aulas(12)
    sc = Scenario(angles_deg=(5.0,), snapshots=16)
    ec = extended_covariance(simulate_snapshots(other, sc))
    with pytest.raises(ValueError):
        virtual_observation(ec, arr)


# ---------------------------------------------------------------------------
# Snapshot dump format
# ---------------------------------------------------------------------------


def test_snapshot_file_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.standard_normal((5, 7)) + 1j * rng.standard_normal((5, 7))
    path = tmp_path / "snap.bin"
    write_snapshots(path, x)
    back = read_snapshots(path)
    assert back.shape == (5, 7)
    assert back.dtype == np.complex128
    np.testing.assert_array_equal(back, x.astype(np.complex64).astype(np.complex128))


def test_snapshot_file_header_layout(tmp_path):
    path = tmp_path / "snap.bin"
    write_snapshots(path, np.zeros((3, 4), dtype=complex))
    raw = path.read_bytes()
    assert raw[:4] == SNAPSHOT_MAGIC
    version, n, t = struct.unpack("<III", raw[4:16])
    assert (version, n, t) == (1, 3, 4)
    assert len(raw) == 16 + 8 * 3 * 4


def test_snapshot_file_rejects_corruption(tmp_path):
    path = tmp_path / "snap.bin"
    write_snapshots(path, np.zeros((3, 4), dtype=complex))
    raw = bytearray(path.read_bytes())

    bad_magic = tmp_path / "bad_magic.bin"
    bad_magic.write_bytes(b"XXXX" + bytes(raw[4:]))
    with pytest.raises(ValueError):
        read_snapshots(bad_magic)

    bad_version = tmp_path / "bad_version.bin"
    bad_version.write_bytes(bytes(raw[:4]) + struct.pack("<III", 9, 3, 4) + bytes(raw[16:]))
    with pytest.raises(ValueError):
        read_snapshots(bad_version)

    truncated = tmp_path / "trunc.bin"
    truncated.write_bytes(bytes(raw[:-8]))
    with pytest.raises(ValueError):
        read_snapshots(truncated)


def test_write_snapshots_rejects_non_matrix(tmp_path):
    with pytest.raises(ValueError):
        write_snapshots(tmp_path / "x.bin", np.zeros(5, dtype=complex))
