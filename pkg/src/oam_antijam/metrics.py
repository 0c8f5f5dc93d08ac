"""Per-mode SNR, spectrum efficiency, and Monte Carlo sweeps.

The proposed scheme senses which modes are jammed, splits the total transmit
power over the clean modes, and rides the reflected jamming on the jammed
ones; the baseline is the identical system with the jammed-mode contribution
forced to zero. Sweeps iterate (SNR, jammed-mode count, ring size) grids and
record spectrum efficiency plus the detector and decoder probabilities.

SNR axis semantics: ``snr_db`` fixes the receiver noise variance as
(allocated per-mode transmit power) / SNR. With the default unit-modulus
element channel this coincides with the per-mode received SNR, so sweeps are
independent of the absolute free-space scale. Total transmit power at each
grid point is per-mode power times the number of clean modes, keeping the
per-mode allocation constant across the jammed-count and ring-size axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .backscatter import (CalibrationError, EnergyThreshold, PgaAlphabet,
                          alternating_preamble, average_correct_detection,
                          calibrate_from_preamble, hypothesis_variance,
                          receiver_background_variance, simulate_backscatter_bits)
from .channel import APPROXIMATE, build_channel_matrix, mode_link_gains
from .config import ConfigurationError, LinkConfig
from .jamming import NOISE_VARIANCE_FLOOR, complex_gaussian
from .sensing import DetectionStats, ModePartition, detection_probabilities

JAMMED = "jammed"
UNJAMMED = "unjammed"

PROPOSED = "proposed"
BASELINE = "baseline"

TARGETED = "targeted"
BROADBAND = "iid"


@dataclass(frozen=True)
class ModeSnr:
    """Detection-weighted SNR of a single mode."""

    mode: int
    snr_linear: float
    branch: str

    def __post_init__(self) -> None:
        if self.branch not in (JAMMED, UNJAMMED):
            raise ValueError(f"unknown branch {self.branch!r}")
        if self.snr_linear < 0.0:
            raise ValueError(f"snr must be >= 0, got {self.snr_linear}")


@dataclass(frozen=True)
class SweepResult:
    """Averaged outcome of one (scheme, grid point) cell."""

    scheme: str
    snr_db: float
    n_elements: int
    n_jammed: int
    se_bits: float
    p_j: float
    p_u: float
    p_c: float
    ber: float
    trials: int
    seed: int
    se_stderr: float = 0.0


@dataclass(frozen=True)
class SweepAxes:
    snr_db: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    n_jammed: tuple[int, ...] = (0, 2, 4, 8)
    n_elements: tuple[int, ...] = (16,)


SNR_OVER_NOISE = "noise"
SNR_OVER_NOISE_PLUS_JAMMING = "noise-plus-jamming"


@dataclass(frozen=True)
class SweepOptions:
    """Knobs of the Monte Carlo sweep beyond the physical link parameters."""

    jam_model: str = TARGETED
    mode_jam_variance: float = 1.0   # per-jammed-mode variance of targeted jamming
    power_per_mode: float | None = None  # None: config.transmit_power_total / n_tx
    ber_trials: int = 25
    ber_symbols: int = 8
    verbatim_means: bool = False
    snr_reference: str = SNR_OVER_NOISE  # what the SNR axis divides the signal by

    def __post_init__(self) -> None:
        if self.jam_model not in (TARGETED, BROADBAND):
            raise ConfigurationError(f"unknown jamming model {self.jam_model!r}")
        if self.mode_jam_variance <= 0.0:
            raise ConfigurationError(
                f"mode_jam_variance must be positive, got {self.mode_jam_variance}")
        if self.snr_reference not in (SNR_OVER_NOISE, SNR_OVER_NOISE_PLUS_JAMMING):
            raise ConfigurationError(f"unknown snr_reference {self.snr_reference!r}")


def allocate_power(config: LinkConfig, partition: ModePartition) -> np.ndarray:
    """Per-mode transmit power, aligned with ``partition.modes``.

    The total budget is split evenly over the clean modes; jammed modes carry
    no transmit power (their signal rides on the reflected jamming). All-jammed
    partitions yield an all-zero allocation.
    """
    powers = np.zeros(len(partition.modes))
    n_clean = len(partition.unjammed)
    if n_clean == 0:
        return powers
    share = config.transmit_power_total / n_clean
    for i, mode in enumerate(partition.modes):
        if mode in partition.unjammed:
            powers[i] = share
    return powers


def mode_snr(config: LinkConfig, mode: int, partition: ModePartition,
             detection: DetectionStats, p_c: float = 1.0,
             signal_power: float | None = None,
             link_gain: complex | None = None) -> ModeSnr:
    """Detection-weighted power-ratio SNR of one mode.

    gamma = w * |kappa|^2 * E|s|^2 / (M * (noise + jamming variance)), where
    kappa is the composite through-link mode gain and w is P_j * P_c on a
    jammed mode or P_u on a clean one. ``signal_power`` defaults to the even
    split of the power budget (clean) or the mean reflected jamming power
    (jammed); ``link_gain`` defaults to the expanded-matrix composite gain.
    """
    if mode not in partition.modes:
        raise ValueError(f"mode {mode} not in partition range {partition.modes}")
    if not 0.0 <= p_c <= 1.0:
        raise ValueError(f"p_c must lie in [0, 1], got {p_c}")
    branch = JAMMED if mode in partition.jammed else UNJAMMED
    if link_gain is None:
        gains = mode_link_gains(config)
        link_gain = gains[config.mode_indices().index(mode)]
    if signal_power is None:
        if branch == JAMMED:
            alphabet = PgaAlphabet.from_config(config)
            signal_power = alphabet.mean_power_gain * config.jam_variance_tx
        else:
            signal_power = float(allocate_power(config, partition)[
                partition.modes.index(mode)])
    if signal_power < 0.0:
        raise ValueError(f"signal power must be >= 0, got {signal_power}")
    weight = detection.p_jammed * p_c if branch == JAMMED else detection.p_unjammed
    gamma = weight * abs(link_gain) ** 2 * signal_power / receiver_background_variance(config)
    return ModeSnr(mode=mode, snr_linear=float(gamma), branch=branch)


def spectral_efficiency(mode_snrs) -> float:
    """Aggregate rate sum C = sum_l log2(1 + gamma_l) in bits/s/Hz."""
    total = 0.0
    for entry in mode_snrs:
        gamma = entry.snr_linear if isinstance(entry, ModeSnr) else float(entry)
        if gamma < 0.0:
            raise ValueError(f"negative SNR {gamma} is invalid")
        total += math.log2(1.0 + gamma)
    return total


def _point_generator(seed: int, point_index: int, purpose: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(point_index, purpose))
    return np.random.Generator(np.random.PCG64(seq))


def _sense_energies(rng: np.random.Generator, trials: int, n_elements: int,
                    n_samples: int, jam_model: str, mode_variance: float,
                    jam_sets: np.ndarray | None) -> np.ndarray:
    """Mode energies seen by the transmitter detector, one row per trial.

    Runs the real multiplex/decompose chain on the drawn jamming so the
    detector sees exactly what the product path produces.
    """
    from .signals import mode_transform

    w = mode_transform(n_elements)
    if jam_model == BROADBAND:
        element = complex_gaussian(rng, (trials, n_elements, n_samples), mode_variance)
        mode_domain = np.einsum("ln,tnk->tlk", w, element)
    else:
        source = np.zeros((trials, n_elements, n_samples), dtype=complex)
        if jam_sets is not None and jam_sets.shape[1] > 0:
            draws = complex_gaussian(rng, jam_sets.shape + (n_samples,), mode_variance)
            rows = np.arange(trials)[:, None]
            source[rows, jam_sets] = draws
        element = np.einsum("nl,tlk->tnk", w.conj().T, source)
        mode_domain = np.einsum("ln,tnk->tlk", w, element)
    return np.mean(np.abs(mode_domain) ** 2, axis=2)


def _point_thresholds(cfg: LinkConfig, channel, alphabet: PgaAlphabet,
                      carrier_variance: float, rng: np.random.Generator,
                      options: SweepOptions) -> tuple[list[EnergyThreshold], np.ndarray]:
    """Per-mode calibrated thresholds and analytic correct-decision probabilities."""
    preamble = alternating_preamble(cfg.preamble_length)
    kappas = mode_link_gains(cfg, channel)
    k = cfg.samples_per_symbol
    thresholds: list[EnergyThreshold] = []
    p_c = np.empty(len(kappas))
    for i, kappa in enumerate(kappas):
        s2k0 = hypothesis_variance(cfg, kappa, alphabet.gains[0], carrier_variance)
        s2k1 = hypothesis_variance(cfg, kappa, alphabet.gains[-1], carrier_variance)
        try:
            thr = calibrate_from_preamble(cfg, channel, cfg.mode_indices()[i], preamble,
                                          alphabet, carrier_variance, rng,
                                          verbatim_means=options.verbatim_means)
        except CalibrationError:
            # deep-noise fallback: pooled mean energy; averaged P_c is ~0.5 anyway
            pooled = 0.5 * (s2k0 + s2k1)
            thr = EnergyThreshold(q_th=pooled, q0_hat=pooled, q1_hat=2.0 * pooled)
        thresholds.append(thr)
        p_c[i] = average_correct_detection(thr.q_th, k, s2k0, s2k1,
                                           (alphabet.priors[0], alphabet.priors[-1]))
    return thresholds, p_c


def _measure_ber(cfg: LinkConfig, channel, alphabet: PgaAlphabet,
                 thresholds: list[EnergyThreshold], carrier_variance: float,
                 jam_sets: np.ndarray, rng: np.random.Generator,
                 options: SweepOptions) -> float:
    """Empirical symbol error rate of the reflected link on a probe budget."""
    if jam_sets.size == 0 or options.ber_trials == 0 or options.ber_symbols == 0:
        return float("nan")
    modes = cfg.mode_indices()
    errors = 0
    total = 0
    for row in jam_sets[:options.ber_trials]:
        for idx in row:
            bits = (rng.random(options.ber_symbols) < alphabet.priors[-1]).astype(int)
            decided, _ = simulate_backscatter_bits(
                cfg, channel, modes[idx], bits, alphabet, thresholds[idx],
                carrier_variance, rng)
            errors += int(np.sum(decided != bits))
            total += bits.size
    return errors / total if total else float("nan")


def _sweep_point(config: LinkConfig, n_elements: int, n_jammed: int, snr_db: float,
                 trials: int, seed: int, point_index: int,
                 options: SweepOptions) -> dict:
    """All Monte Carlo work for one grid point; schemes share the trials."""
    per_mode = (options.power_per_mode if options.power_per_mode is not None
                else config.transmit_power_total / config.n_tx)
    snr_linear = 10.0 ** (snr_db / 10.0)
    disturbance = per_mode / snr_linear
    if options.snr_reference == SNR_OVER_NOISE_PLUS_JAMMING:
        # the fixed receiver jamming power is part of the SNR denominator
        disturbance -= config.jam_variance_rx
        if disturbance <= 0.0:
            raise ConfigurationError(
                f"snr {snr_db} dB infeasible: per-mode power {per_mode} W over "
                f"noise+jamming requires noise below 0 at jamming "
                f"{config.jam_variance_rx} W")
    cfg = replace(config, n_tx=n_elements, n_rx=n_elements,
                  noise_variance_rx=max(disturbance, NOISE_VARIANCE_FLOOR),
                  transmit_power_total=per_mode * max(n_elements - n_jammed, 1))
    if n_jammed > cfg.mode_count:
        raise ConfigurationError(
            f"n_jammed {n_jammed} exceeds the {cfg.mode_count}-mode range")
    channel = build_channel_matrix(cfg, APPROXIMATE)
    kappas = mode_link_gains(cfg, channel)
    kappa2 = np.abs(kappas) ** 2
    floor = receiver_background_variance(cfg)
    alphabet = PgaAlphabet.from_config(cfg)
    carrier_variance = (options.mode_jam_variance if options.jam_model == TARGETED
                        else cfg.jam_variance_tx)
    k_sense = cfg.samples_per_symbol

    det_jam = detection_probabilities(cfg.energy_threshold_tx, k_sense, carrier_variance)
    if options.jam_model == TARGETED:
        det_clean = DetectionStats(p_jammed=0.0, p_unjammed=1.0)
    else:
        det_clean = detection_probabilities(cfg.energy_threshold_tx, k_sense,
                                            cfg.jam_variance_tx)

    rng_cal = _point_generator(seed, point_index, 0)
    thresholds, p_c_modes = _point_thresholds(cfg, channel, alphabet,
                                              carrier_variance, rng_cal, options)

    rng_trials = _point_generator(seed, point_index, 1)
    n = cfg.mode_count
    if options.jam_model == TARGETED and n_jammed > 0:
        jam_sets = np.array([rng_trials.choice(n, size=n_jammed, replace=False)
                             for _ in range(trials)])
    else:
        jam_sets = np.empty((trials, 0), dtype=int)
    energies = _sense_energies(rng_trials, trials, n, k_sense, options.jam_model,
                               carrier_variance, jam_sets if n_jammed else None)
    flagged = energies >= cfg.energy_threshold_tx          # (trials, N)

    n_clean = n - flagged.sum(axis=1)
    share = np.where(n_clean > 0, cfg.transmit_power_total / np.maximum(n_clean, 1), 0.0)
    gamma_clean = det_clean.p_unjammed * kappa2[None, :] * share[:, None] / floor
    gamma_jam = det_jam.p_jammed * p_c_modes * kappa2 \
        * alphabet.mean_power_gain * carrier_variance / floor

    se_clean_terms = np.where(~flagged, np.log2(1.0 + gamma_clean), 0.0).sum(axis=1)
    se_jam_terms = np.where(flagged, np.log2(1.0 + gamma_jam)[None, :], 0.0).sum(axis=1)
    se_proposed = se_clean_terms + se_jam_terms
    se_baseline = se_clean_terms

    rng_ber = _point_generator(seed, point_index, 2)
    ber = _measure_ber(cfg, channel, alphabet, thresholds, carrier_variance,
                       jam_sets, rng_ber, options)

    def mean_and_stderr(values: np.ndarray) -> tuple[float, float]:
        err = float(values.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
        return float(values.mean()), err

    return {
        PROPOSED: mean_and_stderr(se_proposed),
        BASELINE: mean_and_stderr(se_baseline),
        "p_j": det_jam.p_jammed,
        "p_u": det_clean.p_unjammed,
        "p_c": float(p_c_modes.mean()) if n_jammed > 0 else float("nan"),
        "ber": ber,
    }


def run_sweep(config: LinkConfig, axes: SweepAxes,
              schemes: tuple[str, ...] = (PROPOSED, BASELINE),
              trials: int = 1000, seed: int = 0,
              options: SweepOptions | None = None) -> list[SweepResult]:
    """Monte Carlo sweep over the requested grid, deterministic in the seed.

    Grid order is n_elements, then n_jammed, then snr_db; each point runs
    ``trials`` independent sense/partition/allocate/decide trials on its own
    substream, and both schemes are evaluated on the same realizations.
    """
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    for s in schemes:
        if s not in (PROPOSED, BASELINE):
            raise ConfigurationError(f"unknown scheme {s!r}")
    options = options or SweepOptions()
    results: list[SweepResult] = []
    point_index = 0
    for n_elements in axes.n_elements:
        for n_jammed in axes.n_jammed:
            for snr_db in axes.snr_db:
                point = _sweep_point(config, n_elements, n_jammed, snr_db,
                                     trials, seed, point_index, options)
                for scheme in schemes:
                    se_mean, se_err = point[scheme]
                    if not np.isfinite(se_mean):
                        raise FloatingPointError(
                            f"non-finite spectrum efficiency at "
                            f"(N={n_elements}, l_j={n_jammed}, snr={snr_db})")
                    results.append(SweepResult(
                        scheme=scheme, snr_db=snr_db, n_elements=n_elements,
                        n_jammed=n_jammed, se_bits=se_mean,
                        p_j=point["p_j"], p_u=point["p_u"], p_c=point["p_c"],
                        ber=point["ber"] if scheme == PROPOSED else float("nan"),
                        trials=trials, seed=seed, se_stderr=se_err))
                point_index += 1
    return results


@dataclass(frozen=True)
class TrendCheck:
    name: str
    passed: bool
    detail: str


def check_trends(results: list[SweepResult]) -> list[TrendCheck]:
    """Property checks of the sweep trends, each with 1-standard-error slack.

    Covers scheme dominance, monotone degradation with more jammed modes,
    monotone improvement with SNR, and (when the ring-size axis is swept)
    monotone improvement with element count at non-negative SNR.
    """
    by_key = {(r.scheme, r.n_elements, r.n_jammed, r.snr_db): r for r in results}
    schemes = sorted({r.scheme for r in results})
    n_els = sorted({r.n_elements for r in results})
    n_jams = sorted({r.n_jammed for r in results})
    snrs = sorted({r.snr_db for r in results})
    checks: list[TrendCheck] = []

    def slack(a: SweepResult, b: SweepResult) -> float:
        return math.hypot(a.se_stderr, b.se_stderr)

    if PROPOSED in schemes and BASELINE in schemes:
        bad = [k for k in by_key if k[0] == PROPOSED
               and by_key[k].se_bits < by_key[(BASELINE,) + k[1:]].se_bits]
        checks.append(TrendCheck(
            "proposed >= baseline at every grid point", not bad,
            "ok" if not bad else f"violated at {sorted(bad)[:4]}"))

    if len(n_jams) > 1:
        bad = []
        for scheme in schemes:
            for n_el in n_els:
                for snr in snrs:
                    rs = [by_key[(scheme, n_el, j, snr)] for j in n_jams]
                    for a, b in zip(rs, rs[1:]):
                        if b.se_bits > a.se_bits + slack(a, b):
                            bad.append((scheme, n_el, snr, a.n_jammed, b.n_jammed))
        checks.append(TrendCheck(
            "mean SE non-increasing in jammed-mode count", not bad,
            "ok" if not bad else f"violated at {bad[:4]}"))

    bad = []
    for scheme in schemes:
        for n_el in n_els:
            for j in n_jams:
                rs = [by_key[(scheme, n_el, j, s)] for s in snrs]
                for a, b in zip(rs, rs[1:]):
                    if b.se_bits < a.se_bits - slack(a, b):
                        bad.append((scheme, n_el, j, a.snr_db, b.snr_db))
    checks.append(TrendCheck(
        "mean SE non-decreasing in SNR", not bad,
        "ok" if not bad else f"violated at {bad[:4]}"))

    if len(n_els) > 1:
        bad = []
        for scheme in schemes:
            for j in n_jams:
                for snr in [s for s in snrs if s >= 0.0]:
                    rs = [by_key[(scheme, n, j, snr)] for n in n_els]
                    for a, b in zip(rs, rs[1:]):
                        if b.se_bits < a.se_bits - slack(a, b):
                            bad.append((scheme, j, snr, a.n_elements, b.n_elements))
        checks.append(TrendCheck(
            "mean SE non-decreasing in element count at SNR >= 0 dB", not bad,
            "ok" if not bad else f"violated at {bad[:4]}"))

    return checks
