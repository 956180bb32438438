"""Monte-Carlo experiment runner, sweep expansion and figure presets.

A trial draws one channel on its own random stream (master_seed,
trial_index), builds the configured beamformer and measures capacity and
achieved rate.  Trials that cannot be completed (stream count above the
channel rank, selection killing an RF column, a singular inversion) are
recorded as degenerate and excluded from the means but kept in the
accounting, never silently dropped.  Summaries depend only on the config,
not on worker count or scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial

import numpy as np

from . import closed_form
from .beamformers import (
    PhaseResolution,
    SelectionPolicy,
    digital_svd_beamformer,
    double_rf_beamformer,
    mixed_beamformer,
    mu_zf_digital,
    mu_zf_hybrid,
    quantize_rf,
    select_phase_shifters,
    svd_phase_beamformer,
)
from .channel import GEOMETRIC, RAYLEIGH, ChannelModel, draw_channel
from .errors import (
    ConfigError,
    DegenerateColumnError,
    RankError,
    SingularMatrixError,
)
from .linalg import SeededRng
from .rates import achievable_rate, capacity_p2p, sum_rate_mu

DEFAULT_SEED = 123456789
DEFAULT_TRIALS = 500

SCHEME_KINDS = (
    "digital",
    "svd_phase",
    "double_rf",
    "mixed",
    "quantized",
    "selection",
    "mu_zf_hybrid",
    "mu_zf_digital",
)
MU_SCHEMES = ("mu_zf_hybrid", "mu_zf_digital")

FIGURE_IDS = ("fig2", "fig3", "fig4", "fig7", "fig8", "fig9", "fig10")

SWEEP_PARAMS = ("n", "n_t", "n_r", "rho_db", "k", "m", "bits", "beta_percent", "l_paths", "trials")


@dataclass(frozen=True)
class Scheme:
    """Beamforming scheme selector; bits/beta_percent qualify quantized/selection."""

    kind: str
    bits: int | None = None
    beta_percent: float | None = None

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.kind == "quantized":
            if self.bits is None or not 1 <= self.bits <= 16:
                raise ValueError("quantized scheme needs 1 <= bits <= 16")
        elif self.bits is not None:
            raise ValueError("bits only applies to the quantized scheme")
        if self.kind == "selection":
            if self.beta_percent is None or not 0.0 <= self.beta_percent < 100.0:
                raise ValueError("selection scheme needs beta_percent in [0, 100)")
        elif self.beta_percent is not None:
            raise ValueError("beta_percent only applies to the selection scheme")

    def label(self) -> str:
        if self.kind == "quantized":
            return f"quantized(b={self.bits})"
        if self.kind == "selection":
            return f"selection(beta={self.beta_percent:g})"
        return self.kind


@dataclass(frozen=True)
class SweepAxis:
    param: str
    values: tuple[float, ...]


def _expected_m(scheme: Scheme, k: int) -> tuple[int, int]:
    """Valid (min, max) RF chain count for a scheme with k streams."""
    if scheme.kind == "double_rf":
        return 2 * k, 2 * k
    if scheme.kind == "mixed":
        return k, 2 * k
    return k, k


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment description; immutable and safe to share with workers.

    ``sweep`` marks an axis still to expand; ``sweep_param``/``sweep_value``
    annotate an already-expanded point for reporting.
    """

    name: str
    channel: ChannelModel
    k: int
    m: int
    rho_db: float
    scheme: Scheme
    trials: int = DEFAULT_TRIALS
    master_seed: int = DEFAULT_SEED
    sweep: SweepAxis | None = None
    sweep_param: str | None = None
    sweep_value: float | None = None

    def __post_init__(self):
        if not self.name:
            raise ConfigError("experiment name must be nonempty")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not math.isfinite(self.rho_db):
            raise ConfigError("rho_db must be finite")
        lo, hi = _expected_m(self.scheme, self.k)
        if not lo <= self.m <= hi:
            raise ConfigError(
                f"scheme {self.scheme.kind!r} with k={self.k} needs m in [{lo}, {hi}], got {self.m}"
            )
        if self.scheme.kind in MU_SCHEMES:
            if self.channel.n_r != self.k:
                raise ConfigError(
                    "multiuser schemes need n_r = k single-antenna users "
                    f"(n_r={self.channel.n_r}, k={self.k})"
                )
            if self.k > self.channel.n_t:
                raise ConfigError("multiuser schemes need k <= n_t")
        elif self.k > min(self.channel.n_t, self.channel.n_r):
            raise ConfigError("k must not exceed min(n_t, n_r)")
        if self.sweep is not None:
            if self.sweep.param not in SWEEP_PARAMS:
                raise ConfigError(
                    f"unknown sweep parameter {self.sweep.param!r}; choose from {SWEEP_PARAMS}"
                )
            if len(self.sweep.values) == 0:
                raise ConfigError("sweep values must be nonempty")
            if not all(math.isfinite(v) for v in self.sweep.values):
                raise ConfigError("sweep values must be finite")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    capacity_bits: float
    rate_bits: float
    gap_bits: float
    inactive_fraction: float
    degenerate: bool = False


@dataclass(frozen=True)
class SummaryStats:
    """Per-config aggregates; std errors are std(ddof=1)/sqrt(count)."""

    trial_count: int
    excluded_count: int
    mean_capacity: float
    se_capacity: float
    mean_rate: float
    se_rate: float
    mean_gap: float
    se_gap: float
    mean_inactive: float
    se_inactive: float
    analytic_rate: float | None


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    summary: SummaryStats
    records: tuple[TrialRecord, ...]


def _build_p2p(chan, config: ExperimentConfig, rho: float):
    kind = config.scheme.kind
    if kind == "digital":
        return digital_svd_beamformer(chan, config.k, rho)
    if kind == "svd_phase":
        return svd_phase_beamformer(chan, config.k, rho)
    if kind == "double_rf":
        return double_rf_beamformer(chan, config.k, rho)
    if kind == "mixed":
        return mixed_beamformer(chan, config.k, config.m, rho)
    if kind == "quantized":
        base = svd_phase_beamformer(chan, config.k, rho)
        return quantize_rf(chan, base, PhaseResolution("digital", config.scheme.bits), rho)
    if kind == "selection":
        return select_phase_shifters(
            chan, config.k, rho, SelectionPolicy(config.scheme.beta_percent)
        )
    raise ConfigError(f"scheme {kind!r} is not a point-to-point scheme")


def _inactive_fraction(bf) -> float:
    on = int(np.count_nonzero(bf.f_rf)) + int(np.count_nonzero(bf.w_rf))
    total = bf.f_rf.size + bf.w_rf.size
    return 1.0 - on / total


def run_trial(config: ExperimentConfig, trial_index: int) -> TrialRecord:
    """Execute one Monte-Carlo trial on its own random stream."""
    rng = SeededRng(config.master_seed, trial_index)
    chan = draw_channel(config.channel, rng)
    rho = 10.0 ** (config.rho_db / 10.0)
    try:
        if config.scheme.kind in MU_SCHEMES:
            baseline = mu_zf_digital(chan, config.k, rho)
            capacity = sum_rate_mu(chan, baseline, rho).rate_bits
            if config.scheme.kind == "mu_zf_digital":
                bf = baseline
            else:
                bf = mu_zf_hybrid(chan, config.k, rho)
            rate = sum_rate_mu(chan, bf, rho).rate_bits
            inactive = math.nan
        else:
            capacity = capacity_p2p(chan, config.k, rho).rate_bits
            bf = _build_p2p(chan, config, rho)
            rate = achievable_rate(chan, bf, rho).rate_bits
            inactive = (
                _inactive_fraction(bf) if config.scheme.kind == "selection" else math.nan
            )
    except (RankError, DegenerateColumnError, SingularMatrixError):
        return TrialRecord(trial_index, math.nan, math.nan, math.nan, math.nan, True)
    return TrialRecord(trial_index, capacity, rate, capacity - rate, inactive, False)


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    if values.size == 0:
        return math.nan, math.nan
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, math.nan
    return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))


def analytic_gap(config: ExperimentConfig) -> float | None:
    """Closed-form capacity-to-rate gap predicted for this config, if any."""
    kind = config.scheme.kind
    rich = config.channel.kind == RAYLEIGH
    if kind in ("digital", "double_rf", "mu_zf_digital"):
        return 0.0
    if kind == "svd_phase":
        return closed_form.svd_phase_gap(config.k) if rich else 0.0
    if kind == "mixed":
        return closed_form.mixed_gap(config.k, config.m) if rich else 0.0
    if kind == "quantized":
        base = closed_form.svd_phase_gap(config.k) if rich else 0.0
        bound = closed_form.quant_gap_bound(config.k, config.scheme.bits)
        return None if math.isinf(bound) else base + bound
    if kind == "selection":
        return closed_form.selection_gap(config.k, config.scheme.beta_percent) if rich else None
    if kind == "mu_zf_hybrid":
        return closed_form.mu_zf_gap(config.k)
    return None


def summarize(config: ExperimentConfig, records: list[TrialRecord]) -> SummaryStats:
    included = [r for r in records if not r.degenerate]
    cap = np.array([r.capacity_bits for r in included])
    rate = np.array([r.rate_bits for r in included])
    gap = np.array([r.gap_bits for r in included])
    mean_cap, se_cap = _mean_se(cap)
    mean_rate, se_rate = _mean_se(rate)
    mean_gap, se_gap = _mean_se(gap)
    if config.scheme.kind == "selection" and included:
        mean_inact, se_inact = _mean_se(np.array([r.inactive_fraction for r in included]))
    else:
        mean_inact, se_inact = math.nan, math.nan
    gap_pred = analytic_gap(config)
    analytic = None
    if gap_pred is not None and math.isfinite(mean_cap):
        analytic = closed_form.predicted_rate(mean_cap, gap_pred)
    return SummaryStats(
        trial_count=len(included),
        excluded_count=len(records) - len(included),
        mean_capacity=mean_cap,
        se_capacity=se_cap,
        mean_rate=mean_rate,
        se_rate=se_rate,
        mean_gap=mean_gap,
        se_gap=se_gap,
        mean_inactive=mean_inact,
        se_inactive=se_inact,
        analytic_rate=analytic,
    )


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Run all trials of a single-point config; deterministic for fixed config.

    Trials fan out over ``workers`` processes when workers > 1; aggregation
    is ordered by trial_index either way, so the summary is byte-identical
    across worker counts.
    """
    if config.sweep is not None:
        raise ConfigError("config still carries a sweep axis; expand_sweep() it first")
    indices = range(config.trials)
    if workers <= 1:
        records = [run_trial(config, i) for i in indices]
    else:
        chunk = max(1, config.trials // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(partial(run_trial, config), indices, chunksize=chunk))
    records.sort(key=lambda r: r.trial_index)
    return ExperimentResult(config, summarize(config, records), tuple(records))


def _apply_sweep_value(config: ExperimentConfig, param: str, value: float) -> ExperimentConfig:
    def as_count(v: float) -> int:
        n = int(round(v))
        if abs(v - n) > 1e-9 or n < 1:
            raise ConfigError(f"sweep value {v!r} for {param!r} must be a positive integer")
        return n

    chan = config.channel
    scheme = config.scheme
    point = {"sweep": None, "sweep_param": param, "sweep_value": float(value)}
    if param == "n":
        n = as_count(value)
        chan = replace(chan, n_t=n, n_r=n)
        return replace(config, channel=chan, **point)
    if param == "n_t":
        return replace(config, channel=replace(chan, n_t=as_count(value)), **point)
    if param == "n_r":
        return replace(config, channel=replace(chan, n_r=as_count(value)), **point)
    if param == "rho_db":
        return replace(config, rho_db=float(value), **point)
    if param == "k":
        k = as_count(value)
        if scheme.kind == "mixed":
            raise ConfigError("sweeping k is ambiguous for the mixed scheme; sweep m instead")
        m = 2 * k if scheme.kind == "double_rf" else k
        return replace(config, k=k, m=m, **point)
    if param == "m":
        return replace(config, m=as_count(value), **point)
    if param == "bits":
        return replace(config, scheme=replace(scheme, bits=as_count(value)), **point)
    if param == "beta_percent":
        return replace(config, scheme=replace(scheme, beta_percent=float(value)), **point)
    if param == "l_paths":
        return replace(config, channel=replace(chan, l_paths=as_count(value)), **point)
    if param == "trials":
        return replace(config, trials=as_count(value), **point)
    raise ConfigError(f"unknown sweep parameter {param!r}")


def expand_sweep(config: ExperimentConfig) -> list[ExperimentConfig]:
    """Expand a config's sweep axis into named single-point configs."""
    if config.sweep is None:
        return [config]
    out = []
    for value in config.sweep.values:
        point = _apply_sweep_value(config, config.sweep.param, value)
        out.append(replace(point, name=f"{config.name}_{config.sweep.param}{value:g}"))
    return out


def _rayleigh(n_t: int, n_r: int | None = None) -> ChannelModel:
    return ChannelModel(RAYLEIGH, n_t, n_r if n_r is not None else n_t)


def _geometric(n: int, l_paths: int = 5) -> ChannelModel:
    return ChannelModel(GEOMETRIC, n, n, l_paths=l_paths)


_N_SWEEP = (8, 16, 32, 64, 128, 256, 512)
_RHO_DB_DEFAULT = 34.0


def figure_preset(
    fig_id: str, trials: int = DEFAULT_TRIALS, master_seed: int = DEFAULT_SEED
) -> list[ExperimentConfig]:
    """Ready-to-run configs for one of the built-in result figures.

    fig2: singular-vector amplitude sampling runs at n = 16 and 64.
    fig3/fig4: rate vs array size, Rayleigh / geometric (5 paths).
    fig7: digital-phase-shifter resolution sweep plus the analog reference.
    fig8: multiuser ZF, digital vs hybrid, over SNR at n_t = 64.
    fig9: selection fraction sweep at n = 16 and 64.
    fig10: selection at beta = 25 vs the all-on design over array size.
    """
    common = dict(k=4, m=4, rho_db=_RHO_DB_DEFAULT, trials=trials, master_seed=master_seed)
    phase = Scheme("svd_phase")
    out: list[ExperimentConfig] = []
    if fig_id == "fig2":
        for n in (16, 64):
            out.append(
                ExperimentConfig(
                    name=f"fig2_svd_phase_n{n}",
                    channel=_rayleigh(n),
                    scheme=phase,
                    sweep_param="n",
                    sweep_value=float(n),
                    **common,
                )
            )
    elif fig_id in ("fig3", "fig4"):
        for n in _N_SWEEP:
            chan = _rayleigh(n) if fig_id == "fig3" else _geometric(n)
            out.append(
                ExperimentConfig(
                    name=f"{fig_id}_svd_phase_n{n}",
                    channel=chan,
                    scheme=phase,
                    sweep_param="n",
                    sweep_value=float(n),
                    **common,
                )
            )
    elif fig_id == "fig7":
        out.append(
            ExperimentConfig(
                name="fig7_svd_phase_n64", channel=_rayleigh(64), scheme=phase, **common
            )
        )
        for bits in (1, 2, 3, 4):
            out.append(
                ExperimentConfig(
                    name=f"fig7_quantized_b{bits}",
                    channel=_rayleigh(64),
                    scheme=Scheme("quantized", bits=bits),
                    sweep_param="bits",
                    sweep_value=float(bits),
                    **common,
                )
            )
    elif fig_id == "fig8":
        mu_common = dict(k=4, m=4, trials=trials, master_seed=master_seed)
        for kind in ("mu_zf_digital", "mu_zf_hybrid"):
            for rho_db in range(0, 41, 5):
                out.append(
                    ExperimentConfig(
                        name=f"fig8_{kind}_rho{rho_db}",
                        channel=_rayleigh(64, 4),
                        rho_db=float(rho_db),
                        scheme=Scheme(kind),
                        sweep_param="rho_db",
                        sweep_value=float(rho_db),
                        **mu_common,
                    )
                )
    elif fig_id == "fig9":
        for n in (16, 64):
            for beta in (0.0, 10.0, 25.0, 50.0, 75.0):
                out.append(
                    ExperimentConfig(
                        name=f"fig9_selection_n{n}_beta{beta:g}",
                        channel=_rayleigh(n),
                        scheme=Scheme("selection", beta_percent=beta),
                        sweep_param="beta_percent",
                        sweep_value=beta,
                        **common,
                    )
                )
    elif fig_id == "fig10":
        for n in _N_SWEEP:
            for scheme in (phase, Scheme("selection", beta_percent=25.0)):
                out.append(
                    ExperimentConfig(
                        name=f"fig10_{scheme.kind}_n{n}",
                        channel=_rayleigh(n),
                        scheme=scheme,
                        sweep_param="n",
                        sweep_value=float(n),
                        **common,
                    )
                )
    else:
        raise ConfigError(f"unknown figure id {fig_id!r}; choose from {FIGURE_IDS}")
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, ".12g")
    return str(value)


def result_row(config: ExperimentConfig, summary: SummaryStats) -> dict:
    """Flatten one (config, summary) pair into the CSV column contract."""
    return {
        "experiment": config.name,
        "sweep_param": config.sweep_param or "",
        "sweep_value": _fmt(config.sweep_value),
        "scheme": config.scheme.label(),
        "n_t": str(config.channel.n_t),
        "n_r": str(config.channel.n_r),
        "k": str(config.k),
        "m": str(config.m),
        "rho_db": _fmt(config.rho_db),
        "trials": str(config.trials),
        "mean_rate": _fmt(summary.mean_rate),
        "std_err": _fmt(summary.se_rate),
        "analytic_rate": _fmt(summary.analytic_rate),
        "mean_gap": _fmt(summary.mean_gap),
        "inactive_fraction": _fmt(summary.mean_inactive),
        "excluded": str(summary.excluded_count),
    }
