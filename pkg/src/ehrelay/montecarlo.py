"""Monte Carlo simulator of the relay network at the channel-gain level.

Every trial draws ``3 * L`` unit exponentials in a fixed order (the ``L``
source-relay gains, then the ``L`` relay-destination gains, then the ``L``
interferer-relay gains) and pushes them through the SINR, harvested-power
and destination-SNR expressions literally.

Trials are grouped into fixed blocks of :data:`BLOCK_SIZE`. Block ``k`` owns
its own Philox stream keyed by ``(seed, k)``, so any trial's draws depend
only on the seed and the trial index, and results do not depend on how
blocks are spread across workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import SystemConfig

__all__ = [
    "BLOCK_SIZE",
    "WORKERS_ENV",
    "TrialOutcome",
    "OutageEstimate",
    "SimulationSummary",
    "block_generator",
    "draw_gains",
    "evaluate_trials",
    "sample_trial",
    "simulate",
    "estimate_outage",
    "default_workers",
]

BLOCK_SIZE = 1 << 16
WORKERS_ENV = "EHRELAY_WORKERS"


@dataclass(frozen=True)
class TrialOutcome:
    decoding_set: tuple[int, ...]
    selected_relay: int | None
    dest_snr: float
    is_outage: bool


@dataclass(frozen=True)
class OutageEstimate:
    p_hat: float
    n_trials: int
    stderr: float
    seed: int

    @classmethod
    def from_count(cls, outages: int, n_trials: int, seed: int) -> "OutageEstimate":
        p_hat = outages / n_trials
        return cls(p_hat, n_trials, math.sqrt(p_hat * (1.0 - p_hat) / n_trials), seed)


@dataclass(frozen=True)
class SimulationSummary:
    """Aggregates collected alongside the outage estimate.

    ``first_relay_decodes`` counts trials in which relay 0 decoded;
    ``set_size_counts[l]`` counts trials whose decoding set had ``l`` relays.
    """

    estimate: OutageEstimate
    first_relay_decodes: int
    set_size_counts: tuple[int, ...]


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    if value:
        workers = int(value)
        if workers < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1, got {value!r}")
        return workers
    return os.cpu_count() or 1


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Random stream for trials ``block*BLOCK_SIZE`` onward."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(block),))
    return np.random.Generator(np.random.Philox(ss))


def draw_gains(config: SystemConfig, rng: np.random.Generator, n: int):
    """Draw channel power gains for ``n`` trials.

    Returns
    -------
    h2, g2, beta2 : ndarray, shape (n, L)
        ``|h|^2``, ``|g|^2`` and ``|beta|^2``, exponential with means
        ``omega_h``, ``omega_g`` and ``omega_beta``.
    """
    L = config.n_relays
    e = rng.standard_exponential((n, 3, L))
    return (e[:, 0, :] * config.omega_h,
            e[:, 1, :] * config.omega_g,
            e[:, 2, :] * config.omega_beta)


def evaluate_trials(config: SystemConfig, h2, g2, beta2):
    """Apply the decode/harvest/select rules to arrays of channel gains.

    Returns a dict of arrays: ``decodes`` (n, L) bool, ``dest_snr`` (n, L)
    destination SNR of every relay, ``selected`` (n,) index of the forwarding
    relay or -1, ``best_snr`` (n,) destination SNR of the selected relay
    (zero when nothing decodes) and ``outage`` (n,) bool.
    """
    theta, eta = config.theta, config.eta
    signal = config.p_s * h2
    interference = config.p_i * beta2
    gamma_sr = (1.0 - theta) * signal / (config.sigma2_r + (1.0 - theta) * interference)
    decodes = gamma_sr >= config.gamma_th
    # Harvested energy over T/2 divided by T/2; free of the 1/(1-theta) form.
    p_relay = eta * theta * (signal + interference)
    dest_snr = p_relay * g2 / config.sigma2_d
    masked = np.where(decodes, dest_snr, -np.inf)
    selected = np.argmax(masked, axis=1)  # first maximum wins ties
    any_decode = decodes.any(axis=1)
    best_snr = np.where(any_decode, np.take_along_axis(dest_snr, selected[:, None], 1)[:, 0], 0.0)
    selected = np.where(any_decode, selected, -1)
    outage = ~any_decode | (best_snr < config.gamma_th)
    return {"decodes": decodes, "dest_snr": dest_snr, "selected": selected,
            "best_snr": best_snr, "outage": outage}


def sample_trial(config: SystemConfig, stream: np.random.Generator) -> TrialOutcome:
    """Run one trial, consuming exactly ``3 * L`` draws from ``stream``."""
    h2, g2, beta2 = draw_gains(config, stream, 1)
    res = evaluate_trials(config, h2, g2, beta2)
    selected = int(res["selected"][0])
    return TrialOutcome(
        decoding_set=tuple(int(i) for i in np.flatnonzero(res["decodes"][0])),
        selected_relay=None if selected < 0 else selected,
        dest_snr=float(res["best_snr"][0]),
        is_outage=bool(res["outage"][0]),
    )


def _run_block(config: SystemConfig, seed: int, block: int, n: int):
    rng = block_generator(seed, block)
    res = evaluate_trials(config, *draw_gains(config, rng, n))
    sizes = np.bincount(res["decodes"].sum(axis=1), minlength=config.n_relays + 1)
    return int(res["outage"].sum()), int(res["decodes"][:, 0].sum()), sizes


def simulate(config: SystemConfig, n_trials: int, seed: int,
             workers: int | None = None) -> SimulationSummary:
    """Simulate ``n_trials`` independent trials and aggregate them."""
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    n_blocks = -(-n_trials // BLOCK_SIZE)
    sizes = [min(BLOCK_SIZE, n_trials - k * BLOCK_SIZE) for k in range(n_blocks)]
    if workers == 1 or n_blocks == 1:
        parts = [_run_block(config, seed, k, n) for k, n in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda kn: _run_block(config, seed, *kn), enumerate(sizes)))
    outages = sum(p[0] for p in parts)
    first = sum(p[1] for p in parts)
    set_sizes = np.sum([p[2] for p in parts], axis=0)
    return SimulationSummary(
        estimate=OutageEstimate.from_count(outages, n_trials, seed),
        first_relay_decodes=first,
        set_size_counts=tuple(int(c) for c in set_sizes),
    )


def estimate_outage(config: SystemConfig, n_trials: int, seed: int,
                    workers: int | None = None) -> OutageEstimate:
    """Empirical outage probability from ``n_trials`` trials."""
    return simulate(config, n_trials, seed, workers).estimate
