"""Per-user uplink channel: Gauss-Markov block fading, mobility, zero-forcing detection.

Each of the M single-antenna users sees an N-antenna base station (M < N).
Channels evolve as a first-order autoregressive process with correlation
``rho`` (Jakes model: rho = J0(2 pi f_d tau0)); users drift around their base
distance, which moves the path-loss operating point of the innovation term.

The zero-forcing detector H^dagger = (H^H H)^{-1} H^H couples users only
through the diagonal of the inverse gram matrix, so :func:`compute_zf` is the
one synchronization point between otherwise independent per-user state.
"""

from dataclasses import dataclass, replace

import numpy as np

from .numerics import bessel_j0, sample_complex_gaussian, zf_diag

MOBILITY_BOUND_M = 10.0  # |cumulative offset| never exceeds this (meters)


@dataclass
class ChannelParams:
    n_antennas: int = 4
    n_users: int = 3
    h0: float = 1e-3          # path-loss constant at reference distance (-30 dB)
    d0: float = 1.0           # reference distance (m)
    alpha: float = 3.0        # path-loss exponent
    rho: float = 0.95         # slot-to-slot correlation coefficient
    tau0: float = 1e-3        # slot length (s)
    fd: float = 70.0          # Doppler frequency (Hz)
    sigma_r2: float = 1e-9    # receiver noise power (W)

    def __post_init__(self):
        if not self.n_users < self.n_antennas:
            raise ValueError(
                f"need n_users < n_antennas, got M={self.n_users}, N={self.n_antennas}"
            )
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        for name in ("h0", "d0", "alpha", "tau0", "fd", "sigma_r2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")


@dataclass
class UserChannel:
    h: np.ndarray             # complex channel vector, length n_antennas
    base_distance: float      # m
    cumulative_offset: float  # m, clamped to +-MOBILITY_BOUND_M

    @property
    def distance(self) -> float:
        return self.base_distance + self.cumulative_offset


@dataclass
class ZfReport:
    gamma: np.ndarray  # per-user post-detection SINR, >= 0
    phi: np.ndarray    # per-user power ratio, in (0, 1]


def correlation_from_doppler(fd: float, tau0: float) -> float:
    """Jakes-model slot correlation J0(2 pi f_d tau0)."""
    return bessel_j0(2.0 * np.pi * fd * tau0)


def path_loss_variance(params: ChannelParams, distance: float) -> float:
    """Per-entry channel variance h0 (d0 / d)^alpha at the given distance."""
    if distance <= 0:
        raise ValueError(f"distance must be > 0, got {distance}")
    return params.h0 * (params.d0 / distance) ** params.alpha


def init_channel(params: ChannelParams, distance: float, rng: np.random.Generator) -> UserChannel:
    """Fresh channel draw h ~ CN(0, h0 (d0/d)^alpha I_N) at zero mobility offset."""
    var = path_loss_variance(params, distance)
    h = sample_complex_gaussian(params.n_antennas, var, rng)
    return UserChannel(h=h, base_distance=distance, cumulative_offset=0.0)


def evolve_channel(ch: UserChannel, params: ChannelParams, rng: np.random.Generator) -> UserChannel:
    """One autoregressive fading step: h <- rho h + sqrt(1 - rho^2) e.

    The innovation e ~ CN(0, h0 (d0/d)^alpha I_N) uses the user's current
    distance, so mobility feeds into the channel statistics.
    """
    var = path_loss_variance(params, ch.distance)
    e = sample_complex_gaussian(params.n_antennas, var, rng)
    rho = params.rho
    h = rho * ch.h + np.sqrt(1.0 - rho * rho) * e
    return replace(ch, h=h)


def apply_mobility_delta(ch: UserChannel, delta: float) -> UserChannel:
    """Shift the mobility offset by ``delta`` meters, clamped to the bound."""
    offset = float(np.clip(ch.cumulative_offset + delta, -MOBILITY_BOUND_M, MOBILITY_BOUND_M))
    return replace(ch, cumulative_offset=offset)


def step_mobility(ch: UserChannel, rng: np.random.Generator) -> UserChannel:
    """Random walk step: offset += N(0, 1) meters, clamped to +-10 m."""
    return apply_mobility_delta(ch, rng.standard_normal())


def compute_zf(
    channels: list[UserChannel],
    p_o: np.ndarray,
    params: ChannelParams,
) -> ZfReport:
    """Zero-forcing SINR and power ratio for all users in one slot.

    With D_m = [(H^H H)^{-1}]_{mm}:
        gamma_m = p_o[m] / (sigma_R^2 D_m)
        phi_m   = 1 / (D_m ||h_m||^2)

    Raises:
        RankDeficiencyError: channel vectors are linearly dependent.
    """
    p_o = np.asarray(p_o, dtype=np.float64)
    if len(channels) != p_o.shape[0]:
        raise ValueError(f"got {len(channels)} channels but {p_o.shape[0]} powers")
    if np.any(p_o < 0):
        raise ValueError("offload powers must be >= 0")
    H = np.column_stack([ch.h for ch in channels])
    diag = zf_diag(H)
    norms2 = np.sum(np.abs(H) ** 2, axis=0)
    gamma = p_o / (params.sigma_r2 * diag)
    phi = 1.0 / (diag * norms2)
    return ZfReport(gamma=gamma, phi=phi)
