"""Snapshot simulation and second-order statistics for strictly
non-circular sources.

Source z emits x_z(t) = sqrt(p_z) * r_z(t) * exp(j*phi_z) with r_z real
standard Gaussian, so both E[x x^H] and the unconjugated E[x x^T] carry
signal structure.  Stacking the two into an extended covariance doubles the
virtual aperture: the lags exposed are exactly the sum-difference co-array of
the physical geometry.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import coarray
from .coupling import CouplingModel, coupling_matrix, get_preset
from .geometry import SensorArray

SNAPSHOT_MAGIC = b"CALB"
SNAPSHOT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Scenario:
    """Source constellation plus observation parameters for one experiment.

    Args:
        angles_deg: source directions, distinct, each strictly inside
            (-90, 90) degrees.
        snapshots: number of time samples T.
        snr_db: per-source SNR (equal-power convention); None means
            noiseless.
        powers: per-source powers p_z (default all 1).
        nc_phases: per-source non-circularity phases phi_z in radians
            (default all 0).
        seed: base RNG seed; trials derive child streams from it.
    """

    angles_deg: tuple[float, ...]
    snapshots: int
    snr_db: float | None = 0.0
    powers: tuple[float, ...] | None = None
    nc_phases: tuple[float, ...] | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        angles = tuple(float(a) for a in np.atleast_1d(self.angles_deg))
        if len(angles) == 0:
            raise ValueError("scenario needs at least one source")
        if any(abs(a) >= 90.0 for a in angles):
            raise ValueError("source angles must lie strictly inside (-90, 90)")
        if len(set(angles)) != len(angles):
            raise ValueError("source angles must be distinct")
        object.__setattr__(self, "angles_deg", angles)

        powers = self.powers
        if powers is None:
            powers = (1.0,) * len(angles)
        powers = tuple(float(p) for p in np.atleast_1d(powers))
        if len(powers) != len(angles):
            raise ValueError("powers length must match angles")
        if any(p < 0 for p in powers):
            raise ValueError("source powers must be nonnegative")
        object.__setattr__(self, "powers", powers)

        phases = self.nc_phases
        if phases is None:
            phases = (0.0,) * len(angles)
        phases = tuple(float(p) for p in np.atleast_1d(phases))
        if len(phases) != len(angles):
            raise ValueError("nc_phases length must match angles")
        object.__setattr__(self, "nc_phases", phases)

        if int(self.snapshots) < 1:
            raise ValueError("snapshots must be >= 1")
        object.__setattr__(self, "snapshots", int(self.snapshots))
        if self.snr_db is not None:
            object.__setattr__(self, "snr_db", float(self.snr_db))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def num_sources(self) -> int:
        return len(self.angles_deg)

    @property
    def noise_power(self) -> float:
        """p_n relative to unit source power; 0 when noiseless (snr_db None
        or +inf)."""
        if self.snr_db is None or math.isinf(self.snr_db):
            return 0.0
        return 10.0 ** (-self.snr_db / 10.0)

    def to_dict(self) -> dict:
        return {
            "angles_deg": list(self.angles_deg),
            "powers": list(self.powers),
            "nc_phases": list(self.nc_phases),
            "snr_db": self.snr_db,
            "snapshots": self.snapshots,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ValueError("scenario must be a JSON object")
        if "angles_deg" not in data or "snapshots" not in data:
            raise ValueError("scenario needs angles_deg and snapshots")
        return cls(
            angles_deg=tuple(data["angles_deg"]),
            snapshots=data["snapshots"],
            snr_db=data.get("snr_db", 0.0),
            powers=data.get("powers"),
            nc_phases=data.get("nc_phases"),
            seed=data.get("seed", 0),
        )


def load_scenario(path) -> tuple[Scenario, CouplingModel | None]:
    """Read a scenario JSON file; an optional "coupling" key holds either a
    preset name or an inline coefficient model."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise ValueError(f"malformed scenario file {path}: {err}") from None
    coupling = data.pop("coupling", None) if isinstance(data, dict) else None
    scenario = Scenario.from_dict(data)
    if coupling is None:
        return scenario, None
    if isinstance(coupling, str):
        return scenario, get_preset(coupling)
    return scenario, CouplingModel.from_dict(coupling)


def steering_vector(array: SensorArray, theta_deg: float) -> np.ndarray:
    """a(theta) with a_u = exp(-j*pi*m_u*sin(theta)) at half-wavelength pitch."""
    theta = float(theta_deg)
    if abs(theta) >= 90.0:
        raise ValueError(f"source angle {theta} out of range (-90, 90)")
    return _steering(array.as_array(), np.array([theta]))[:, 0]


def _steering(positions: np.ndarray, angles_deg: np.ndarray) -> np.ndarray:
    phase = -np.pi * positions[:, None] * np.sin(np.deg2rad(angles_deg))[None, :]
    return np.exp(1j * phase)


def steering_matrix(array: SensorArray, angles_deg: Sequence[float]) -> np.ndarray:
    angles = np.atleast_1d(np.asarray(angles_deg, dtype=float))
    if np.any(np.abs(angles) >= 90.0):
        raise ValueError("source angles must lie strictly inside (-90, 90)")
    return _steering(array.as_array(), angles)


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Counter-based per-trial stream: trial k is reproducible on its own,
    independent of how many trials ran before it."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(trial)])))


def simulate_snapshots(
    array: SensorArray,
    scenario: Scenario,
    coupling: CouplingModel | None = None,
    trial: int = 0,
) -> np.ndarray:
    """Draw an N x T snapshot matrix X = C A s(t) + n(t).

    Sources are strictly non-circular (real Gaussian amplitude, fixed
    non-circularity phase); noise is circular complex white Gaussian with the
    scenario's noise power.
    """
    rng = trial_rng(scenario.seed, trial)
    a = steering_matrix(array, scenario.angles_deg)
    if coupling is not None:
        a = coupling_matrix(array, coupling) @ a
    p = np.asarray(scenario.powers)
    phases = np.exp(1j * np.asarray(scenario.nc_phases))
    amplitudes = rng.standard_normal((scenario.num_sources, scenario.snapshots))
    s = (np.sqrt(p) * phases)[:, None] * amplitudes
    x = a @ s
    pn = scenario.noise_power
    if pn > 0:
        shape = (array.n, scenario.snapshots)
        noise = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        x = x + np.sqrt(pn / 2.0) * noise
    return x


@dataclass(frozen=True)
class ExtendedCovariance:
    """Standard and unconjugated covariance blocks of one snapshot batch."""

    r_s: np.ndarray
    r_hat: np.ndarray

    def __post_init__(self) -> None:
        r_s = np.asarray(self.r_s)
        r_hat = np.asarray(self.r_hat)
        if r_s.shape != r_hat.shape or r_s.ndim != 2 or r_s.shape[0] != r_s.shape[1]:
            raise ValueError("covariance blocks must be square and same-shaped")
        object.__setattr__(self, "r_s", r_s)
        object.__setattr__(self, "r_hat", r_hat)

    @property
    def n(self) -> int:
        return self.r_s.shape[0]

    @property
    def r_so(self) -> np.ndarray:
        """2N x 2N block matrix [[R_s, R_hat], [R_hat*, R_s*]]."""
        return np.block(
            [
                [self.r_s, self.r_hat],
                [np.conj(self.r_hat), np.conj(self.r_s)],
            ]
        )


def extended_covariance(x: np.ndarray) -> ExtendedCovariance:
    """Sample covariances R_s = X X^H / T and R_hat = X X^T / T."""
    x = np.asarray(x)
    if x.ndim != 2:
        raise ValueError("snapshot matrix must be 2-D (sensors x time)")
    t = x.shape[1]
    return ExtendedCovariance(r_s=x @ x.conj().T / t, r_hat=x @ x.T / t)


def exact_extended_covariance(
    array: SensorArray,
    scenario: Scenario,
    coupling: CouplingModel | None = None,
) -> ExtendedCovariance:
    """Ensemble (infinite-snapshot) covariance blocks for a scenario.

    R_s = A diag(p) A^H + p_n I and R_hat = A diag(p e^{j 2 phi}) A^T with
    A the (possibly coupled) steering matrix.  Useful when a test needs the
    model identities to hold to machine precision rather than within
    sampling error.
    """
    a = steering_matrix(array, scenario.angles_deg)
    if coupling is not None:
        a = coupling_matrix(array, coupling) @ a
    p = np.asarray(scenario.powers)
    phi = np.asarray(scenario.nc_phases)
    r_s = (a * p) @ a.conj().T + scenario.noise_power * np.eye(array.n)
    r_hat = (a * (p * np.exp(2j * phi))) @ a.T
    return ExtendedCovariance(r_s=r_s, r_hat=r_hat)


@dataclass(frozen=True)
class VirtualObservation:
    """Averaged virtual-array samples on the contiguous lag segment [-m, m]."""

    lags: np.ndarray
    values: np.ndarray

    @property
    def half_width(self) -> int:
        return int(self.lags[-1])

    def value_at(self, lag: int) -> complex:
        idx = int(lag) + self.half_width
        if idx < 0 or idx >= self.lags.size:
            raise ValueError(f"lag {lag} outside contiguous segment")
        return complex(self.values[idx])


def extended_lag_matrix(array: SensorArray) -> np.ndarray:
    """Lag carried by each entry of the extended covariance.

    Conjugating a sensor at position m behaves like a virtual sensor at -m,
    so with q = [m, -m] the entry (i, j) of the 2N x 2N matrix observes lag
    q_i - q_j.  The set of entries therefore spans exactly the sum-difference
    co-array.
    """
    pos = array.as_array()
    ext = np.concatenate([pos, -pos])
    return ext[:, None] - ext[None, :]


def virtual_observation(ec: ExtendedCovariance, array: SensorArray) -> VirtualObservation:
    """Average extended-covariance entries sharing a lag and keep the
    zero-centered contiguous segment of the sum-difference co-array."""
    if ec.n != array.n:
        raise ValueError("covariance size does not match array")
    lag_matrix = extended_lag_matrix(array)
    flat_lags = lag_matrix.ravel()
    flat_vals = ec.r_so.ravel()
    lags, inverse = np.unique(flat_lags, return_inverse=True)
    sums = np.zeros(lags.size, dtype=complex)
    np.add.at(sums, inverse, flat_vals)
    counts = np.bincount(inverse, minlength=lags.size)
    means = sums / counts

    sdc = coarray.sum_difference_coarray(array)
    udofs, _ = coarray.contiguous_stats(sdc)
    half = (udofs - 1) // 2
    segment = np.arange(-half, half + 1, dtype=np.int64)
    index = np.searchsorted(lags, segment)
    return VirtualObservation(lags=segment, values=means[index])


def write_snapshots(path, x: np.ndarray) -> None:
    """Dump snapshots as little-endian complex64 with a 16-byte header
    (magic "CALB", u32 format version, u32 N, u32 T)."""
    x = np.asarray(x)
    if x.ndim != 2:
        raise ValueError("snapshot matrix must be 2-D (sensors x time)")
    n, t = x.shape
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        fh.write(struct.pack("<III", SNAPSHOT_FORMAT_VERSION, n, t))
        fh.write(np.ascontiguousarray(x.astype("<c8")).tobytes())


def read_snapshots(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) != 16 or header[:4] != SNAPSHOT_MAGIC:
            raise ValueError(f"{path} is not a snapshot dump")
        version, n, t = struct.unpack("<III", header[4:])
        if version != SNAPSHOT_FORMAT_VERSION:
            raise ValueError(f"unsupported snapshot format version {version}")
        payload = fh.read()
    expected = 8 * n * t
    if len(payload) != expected:
        raise ValueError("snapshot dump truncated")
    return np.frombuffer(payload, dtype="<c8").reshape(n, t).astype(np.complex128)
