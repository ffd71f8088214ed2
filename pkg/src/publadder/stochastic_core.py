"""Seeded sampling primitives with reproducible, independent streams.

Every stream is keyed by ``(master_seed, stream_id)``. The key is fed to
:class:`numpy.random.SeedSequence` as entropy plus spawn key, so two streams
with the same key replay identically and streams with different ids are
statistically independent. No global random state is ever touched.

Scalar draws dominate the simulation, so each stream serves uniforms and
standard normals from small pre-drawn buffers instead of calling into numpy
once per draw.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "InvalidParameterError",
    "RngStream",
    "derive_stream",
    "sample_poisson",
    "sample_truncated_normal",
    "sample_start_offset",
    "sample_categorical",
]

_U64_MAX = 2**64 - 1
_BUFFER = 64
# inversion by sequential search is O(lambda); hand larger rates to numpy
_POISSON_INVERSION_MAX = 100.0


class InvalidParameterError(ValueError):
    """A sampler or model function received an out-of-domain argument."""


class RngStream:
    """One reproducible random stream.

    Parameters
    ----------
    master_seed, stream_id : int
        Unsigned 64-bit integers. Equal pairs give bit-identical sequences.
    """

    __slots__ = ("master_seed", "stream_id", "generator", "_u", "_ui", "_z", "_zi")

    def __init__(self, master_seed: int, stream_id: int):
        for name, value in (("master_seed", master_seed), ("stream_id", stream_id)):
            if not isinstance(value, (int, np.integer)) or not 0 <= value <= _U64_MAX:
                raise InvalidParameterError(f"{name} must be an unsigned 64-bit integer, got {value!r}")
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(seq))
        self._u: list[float] = []
        self._ui = 0
        self._z: list[float] = []
        self._zi = 0

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"

    def uniform(self) -> float:
        """Draw from U[0, 1)."""
        if self._ui >= len(self._u):
            self._u = self.generator.random(_BUFFER).tolist()
            self._ui = 0
        x = self._u[self._ui]
        self._ui += 1
        return x

    def normal(self) -> float:
        """Draw from N(0, 1)."""
        if self._zi >= len(self._z):
            self._z = self.generator.standard_normal(_BUFFER).tolist()
            self._zi = 0
        x = self._z[self._zi]
        self._zi += 1
        return x


def derive_stream(master_seed: int, stream_id: int) -> RngStream:
    """Return the stream for ``(master_seed, stream_id)``; pure and deterministic."""
    return RngStream(master_seed, stream_id)


def sample_poisson(lam: float, rng: RngStream) -> int:
    """Poisson(lam) count by inversion with sequential search."""
    if not math.isfinite(lam) or lam < 0:
        raise InvalidParameterError(f"Poisson rate must be finite and >= 0, got {lam!r}")
    if lam == 0:
        return 0
    if lam > _POISSON_INVERSION_MAX:
        return int(rng.generator.poisson(lam))
    u = rng.uniform()
    p = math.exp(-lam)
    cdf = p
    k = 0
    while u > cdf:
        k += 1
        p *= lam / k
        if p == 0.0:
            # cdf has saturated below u through rounding; u is in the far tail
            break
        cdf += p
    return k


def sample_truncated_normal(mean: float, sd: float, rng: RngStream) -> float:
    """Normal(mean, sd) conditioned on being non-negative, by rejection."""
    if not (mean > 0) or not math.isfinite(mean):
        raise InvalidParameterError(f"mean must be finite and > 0, got {mean!r}")
    if not (sd >= 0) or not math.isfinite(sd):
        raise InvalidParameterError(f"sd must be finite and >= 0, got {sd!r}")
    if sd == 0:
        return float(mean)
    while True:
        x = mean + sd * rng.normal()
        if x >= 0.0:
            return x


def sample_start_offset(year_index: int, rng: RngStream, horizon_years: int | None = None) -> float:
    """Continuous uniform submission month within year ``year_index``.

    Returns a value in ``[12*year_index, 12*year_index + 12)``.
    """
    if year_index < 0 or (horizon_years is not None and year_index >= horizon_years):
        raise InvalidParameterError(f"year_index {year_index} outside horizon of {horizon_years} years")
    return 12.0 * year_index + 12.0 * rng.uniform()


def sample_categorical(probs, rng: RngStream) -> int:
    """Index ``i`` with probability ``probs[i]``."""
    total = 0.0
    for p in probs:
        if not (0.0 <= p <= 1.0):
            raise InvalidParameterError(f"probability {p!r} outside [0, 1]")
        total += p
    if not probs or abs(total - 1.0) > 1e-9:
        raise InvalidParameterError(f"probabilities must sum to 1, got {total!r}")
    u = rng.uniform()
    cum = 0.0
    last = 0
    for i, p in enumerate(probs):
        if p > 0:
            last = i
        cum += p
        if u < cum:
            return i
    # u landed in the rounding gap above the final partial sum
    return last
