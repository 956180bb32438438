"""Hybrid beamformer constructions.

All RF-constrained designs here derive directly from the thin SVD of the
channel: the phase-only design copies the phases of the singular vectors,
the double-chain design splits each singular-vector entry across two unit-
modulus shifters so the pair sums back exactly, and the selection design
zeroes shifters whose singular-vector entry falls below a threshold.
Power allocations are always waterfilled over the per-stream gains of the
actual (finite-size) effective channel, not the asymptotic values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .errors import DegenerateColumnError, DimensionError, SingularMatrixError
from .linalg import require_rank, thin_svd
from .rates import COND_LIMIT, waterfill

ANALOG = "analog"
DIGITAL = "digital"


@dataclass(frozen=True)
class PhaseResolution:
    """Analog shifters or a digital grid of 2**bits phases."""

    kind: str
    bits: int | None = None

    def __post_init__(self):
        if self.kind not in (ANALOG, DIGITAL):
            raise ValueError(f"unknown phase resolution kind {self.kind!r}")
        if self.kind == DIGITAL:
            if self.bits is None or not 1 <= self.bits <= 16:
                raise ValueError("digital resolution needs 1 <= bits <= 16")
        elif self.bits is not None:
            raise ValueError("bits only applies to digital resolution")


@dataclass(frozen=True)
class SelectionPolicy:
    """Turn off the weakest ``beta_percent`` of phase shifters on average."""

    beta_percent: float

    def __post_init__(self):
        if not 0.0 <= self.beta_percent < 100.0:
            raise ValueError("beta_percent must lie in [0, 100)")

    @property
    def alpha(self) -> float:
        """Amplitude threshold whose Rayleigh CDF mass equals beta."""
        return math.sqrt(-math.log(1.0 - self.beta_percent / 100.0))


@dataclass(frozen=True)
class HybridBeamformer:
    """A complete transmit/receive beamforming configuration.

    ``f_rf`` (n_t x m) and ``f_b`` (m x k) factor the precoder, with the
    receive side optional for multiuser downlink use.  ``power`` holds the
    per-stream fractions of the unit budget, ``gamma_t``/``gamma_r`` the
    stored normalization factors trace(F^H F)/K and trace(W^H W)/K, and
    ``active_mask`` marks which transmit phase shifters are switched on.
    ``digital`` flags unconstrained designs whose ``f_rf`` entries are not
    unit modulus.  Values are immutable; build a new one to change fields.
    """

    f_rf: np.ndarray
    f_b: np.ndarray
    power: np.ndarray
    gamma_t: float
    gamma_r: float = 1.0
    w_rf: np.ndarray | None = None
    w_b: np.ndarray | None = None
    active_mask: np.ndarray | None = None
    digital: bool = False

    def precoder(self) -> np.ndarray:
        return self.f_rf @ self.f_b

    def combiner(self) -> np.ndarray | None:
        if self.w_rf is None or self.w_b is None:
            return None
        return self.w_rf @ self.w_b


def _check_rho(rho: float) -> None:
    if not rho > 0.0:
        raise ValueError("rho must be a positive linear SNR")


def _gamma(mat: np.ndarray, k: int) -> float:
    return float(np.trace(mat.conj().T @ mat).real) / k


def _effective_waterfill(h, f_rf, f_b, w_rf, w_b, rho):
    """Waterfill over |diag of the normalized effective channel|^2."""
    f = f_rf @ f_b
    w = w_rf @ w_b
    k = f.shape[1]
    gamma_t = _gamma(f, k)
    gamma_r = _gamma(w, k)
    e = (w.conj().T @ h @ f) / math.sqrt(gamma_t * gamma_r)
    gains = np.abs(np.diag(e)) ** 2
    return waterfill(gains, rho), gamma_t, gamma_r


def digital_svd_beamformer(chan: ChannelRealization, k: int, rho: float) -> HybridBeamformer:
    """Unconstrained SVD design: F = V_{1:k}, W = U_{1:k}, capacity-achieving."""
    _check_rho(rho)
    svd = thin_svd(chan.h, k)
    require_rank(svd.sigma, k)
    eye = np.eye(k, dtype=complex)
    power, gamma_t, gamma_r = _effective_waterfill(chan.h, svd.v, eye, svd.u, eye, rho)
    return HybridBeamformer(
        f_rf=svd.v,
        f_b=eye,
        power=power,
        gamma_t=gamma_t,
        gamma_r=gamma_r,
        w_rf=svd.u,
        w_b=eye,
        active_mask=np.ones(svd.v.shape, dtype=bool),
        digital=True,
    )


def _paired_phase_columns(x: np.ndarray) -> np.ndarray:
    """Two unit-modulus columns per input column, summing back to 2x.

    Uses |x| e^(j ang) = (e^(j(ang+acos|x|)) + e^(j(ang-acos|x|))) / 2 with
    the principal acos branch in [0, pi]; valid because |x| <= 1 for
    entries of orthonormal columns.
    """
    ang = np.angle(x)
    off = np.arccos(np.clip(np.abs(x), 0.0, 1.0))
    out = np.empty((x.shape[0], 2 * x.shape[1]), dtype=complex)
    out[:, 0::2] = np.exp(1j * (ang + off))
    out[:, 1::2] = np.exp(1j * (ang - off))
    return out


def _mixed_rf(cols: np.ndarray, n_pairs: int) -> tuple[np.ndarray, np.ndarray]:
    """RF matrix and baseband mixer: first n_pairs streams get shifter pairs,
    the rest phase-only single chains.

    When pair and phase-only columns coexist, the pair blocks are scaled so
    every composite column carries the same norm as a phase-only column
    (sqrt(n)); the rate is invariant to the common scale, but a scalar
    normalization over unequal column norms would starve the exactly
    factored streams of transmit power.
    """
    n, k = cols.shape
    m = k + n_pairs
    rf = np.empty((n, m), dtype=complex)
    rf[:, : 2 * n_pairs] = _paired_phase_columns(cols[:, :n_pairs])
    rf[:, 2 * n_pairs :] = np.exp(1j * np.angle(cols[:, n_pairs:]))
    pair_weight = 0.5 if n_pairs == k else 0.5 * math.sqrt(n)
    mixer = np.zeros((m, k), dtype=complex)
    for j in range(n_pairs):
        mixer[2 * j, j] = pair_weight
        mixer[2 * j + 1, j] = pair_weight
    for j in range(n_pairs, k):
        mixer[n_pairs + j, j] = 1.0
    return rf, mixer


def mixed_beamformer(chan: ChannelRealization, k: int, m: int, rho: float) -> HybridBeamformer:
    """Hybrid design for k <= m <= 2k RF chains per side.

    The strongest m - k streams each use a two-shifter pair that
    reproduces the singular-vector column exactly; the remaining 2k - m
    streams use a single phase-only column each.
    """
    _check_rho(rho)
    if not k <= m <= 2 * k:
        raise DimensionError(f"need k <= m <= 2k, got k={k}, m={m}")
    svd = thin_svd(chan.h, k)
    require_rank(svd.sigma, k)
    n_pairs = m - k
    f_rf, f_b = _mixed_rf(svd.v, n_pairs)
    w_rf, w_b = _mixed_rf(svd.u, n_pairs)
    power, gamma_t, gamma_r = _effective_waterfill(chan.h, f_rf, f_b, w_rf, w_b, rho)
    return HybridBeamformer(
        f_rf=f_rf,
        f_b=f_b,
        power=power,
        gamma_t=gamma_t,
        gamma_r=gamma_r,
        w_rf=w_rf,
        w_b=w_b,
        active_mask=np.ones(f_rf.shape, dtype=bool),
    )


def svd_phase_beamformer(chan: ChannelRealization, k: int, rho: float) -> HybridBeamformer:
    """Phase-only RF design with m = k: each shifter copies the phase of the
    matching singular-vector entry; baseband stays identity."""
    return mixed_beamformer(chan, k, k, rho)


def double_rf_beamformer(chan: ChannelRealization, k: int, rho: float) -> HybridBeamformer:
    """Two RF chains per stream (m = 2k): exact factorization of the SVD
    precoder from unit-modulus shifter pairs, so the digital rate is met."""
    return mixed_beamformer(chan, k, 2 * k, rho)


def _snap_phases(x: np.ndarray, bits: int) -> np.ndarray:
    """Round active entries to the closest grid phase by plain absolute
    difference over [0, 2pi).

    The grid is {0, 2pi/2^bits, ..., (2^bits - 1) 2pi/2^bits}; phases past
    the last point round down to it rather than wrapping to 0, and
    half-step ties go to the smaller grid angle.
    """
    step = 2.0 * math.pi / (1 << bits)
    ang = np.mod(np.angle(x), 2.0 * math.pi)
    idx = np.minimum(np.ceil(ang / step - 0.5), (1 << bits) - 1)
    out = np.exp(1j * step * idx)
    out[x == 0] = 0.0
    return out


def quantize_rf(
    chan: ChannelRealization, bf: HybridBeamformer, res: PhaseResolution, rho: float
) -> HybridBeamformer:
    """Replace every active RF phase with its nearest digital grid point and
    re-waterfill over the resulting effective gains."""
    _check_rho(rho)
    if res.kind != DIGITAL:
        raise ValueError("quantization needs a digital phase resolution")
    if bf.digital:
        raise ValueError("cannot quantize an unconstrained (digital) beamformer")
    if bf.w_rf is None or bf.w_b is None:
        raise DimensionError("quantize_rf supports point-to-point beamformers")
    f_rf = _snap_phases(bf.f_rf, res.bits)
    w_rf = _snap_phases(bf.w_rf, res.bits)
    power, gamma_t, gamma_r = _effective_waterfill(chan.h, f_rf, bf.f_b, w_rf, bf.w_b, rho)
    return HybridBeamformer(
        f_rf=f_rf,
        f_b=bf.f_b,
        power=power,
        gamma_t=gamma_t,
        gamma_r=gamma_r,
        w_rf=w_rf,
        w_b=bf.w_b,
        active_mask=bf.active_mask,
        digital=False,
    )


def select_phase_shifters(
    chan: ChannelRealization, k: int, rho: float, policy: SelectionPolicy
) -> HybridBeamformer:
    """Phase-only design with the weakest shifters switched off.

    A transmit shifter stays active only where sqrt(n_t) |V_entry| exceeds
    the policy threshold, and likewise at the receiver with sqrt(n_r) |U|;
    normalization factors come from the actual masked matrices.  Raises
    DegenerateColumnError if any RF column loses all its shifters.
    """
    _check_rho(rho)
    svd = thin_svd(chan.h, k)
    require_rank(svd.sigma, k)
    n_r, n_t = chan.h.shape
    alpha = policy.alpha
    keep_t = math.sqrt(n_t) * np.abs(svd.v) > alpha
    keep_r = math.sqrt(n_r) * np.abs(svd.u) > alpha
    if not (keep_t.any(axis=0).all() and keep_r.any(axis=0).all()):
        raise DegenerateColumnError(
            f"beta={policy.beta_percent}% disabled an entire RF column"
        )
    f_rf = np.where(keep_t, np.exp(1j * np.angle(svd.v)), 0.0)
    w_rf = np.where(keep_r, np.exp(1j * np.angle(svd.u)), 0.0)
    eye = np.eye(k, dtype=complex)
    power, gamma_t, gamma_r = _effective_waterfill(chan.h, f_rf, eye, w_rf, eye, rho)
    return HybridBeamformer(
        f_rf=f_rf,
        f_b=eye,
        power=power,
        gamma_t=gamma_t,
        gamma_r=gamma_r,
        w_rf=w_rf,
        w_b=eye,
        active_mask=keep_t,
    )


def _require_mu_shape(chan: ChannelRealization, k: int) -> None:
    if chan.h.shape[0] != k:
        raise DimensionError(
            f"multiuser downlink needs n_r = k single-antenna users, "
            f"got n_r={chan.h.shape[0]}, k={k}"
        )


def mu_zf_hybrid(chan: ChannelRealization, k: int, rho: float) -> HybridBeamformer:
    """Multiuser hybrid: phase-only RF columns, baseband inverts H F_RF.

    The effective channel H F_RF F_B / sqrt(Gt) is the identity up to the
    power normalization, so each user sees an interference-free link.
    """
    _check_rho(rho)
    _require_mu_shape(chan, k)
    svd = thin_svd(chan.h, k)
    require_rank(svd.sigma, k)
    f_rf = np.exp(1j * np.angle(svd.v))
    he = chan.h @ f_rf
    cond = float(np.linalg.cond(he))
    if not math.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrixError(f"H F_RF condition number {cond:.3e}")
    f_b = np.linalg.inv(he)
    gamma_t = _gamma(f_rf @ f_b, k)
    return HybridBeamformer(
        f_rf=f_rf,
        f_b=f_b,
        power=np.full(k, 1.0 / k),
        gamma_t=gamma_t,
        active_mask=np.ones(f_rf.shape, dtype=bool),
    )


def mu_zf_digital(chan: ChannelRealization, k: int, rho: float) -> HybridBeamformer:
    """Unconstrained zero-forcing: F = H^H (H H^H)^-1, the digital baseline."""
    _check_rho(rho)
    _require_mu_shape(chan, k)
    gram = chan.h @ chan.h.conj().T
    cond = float(np.linalg.cond(gram))
    if not math.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrixError(f"H H^H condition number {cond:.3e}")
    f = chan.h.conj().T @ np.linalg.inv(gram)
    gamma_t = _gamma(f, k)
    return HybridBeamformer(
        f_rf=f,
        f_b=np.eye(k, dtype=complex),
        power=np.full(k, 1.0 / k),
        gamma_t=gamma_t,
        active_mask=np.ones(f.shape, dtype=bool),
        digital=True,
    )
