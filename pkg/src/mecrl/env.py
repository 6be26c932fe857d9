"""Multi-user MEC uplink environment: task buffers, local/offload service, rewards.

Discrete slots of length tau0.  Per slot, each user splits power between local
execution (DVFS cube-root frequency scaling) and uplink offloading (Shannon
rate at the post-ZF SINR).  Buffers follow

    B(t+1) = max(B(t) - d_l(t) - d_o(t), 0) + a(t)

with i.i.d. Poisson arrivals of mean lambda_m tau0 bits.  The reward charges
total transmit+compute power and the slot-start backlog:

    r(t) = -w1 (p_l + p_o) - w2 B(t)/1000

(backlog in kilobits, so both terms are O(1) at the nominal operating point).

Each user owns an independent random stream; the per-slot step is the only
point where users couple, through the zero-forcing detector.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import (
    ChannelParams,
    UserChannel,
    ZfReport,
    compute_zf,
    evolve_channel,
    init_channel,
    step_mobility,
)


@dataclass
class EnvConfig:
    channel: ChannelParams = field(default_factory=ChannelParams)
    arrival_rates: tuple = (1.1e6, 1.0e6, 0.9e6)  # bits/s per user
    p_l_max: float = 2.0      # W
    p_o_max: float = 2.0      # W
    kappa: float = 1e-27      # effective switched capacitance
    cycles_per_bit: float = 500.0
    bandwidth: float = 1e6    # Hz
    w: float = 0.8            # reward balance factor: w1 = 10 w, w2 = 1 - w
    t_max: int = 200          # steps per episode
    base_distance: float = 100.0  # m, all users

    def __post_init__(self):
        self.arrival_rates = tuple(float(r) for r in self.arrival_rates)
        if len(self.arrival_rates) != self.channel.n_users:
            raise ValueError(
                f"{len(self.arrival_rates)} arrival rates for "
                f"{self.channel.n_users} users"
            )
        if not 0.0 <= self.w <= 1.0:
            raise ValueError(f"w must be in [0, 1], got {self.w}")

    @property
    def n_users(self) -> int:
        return self.channel.n_users

    @property
    def w1(self) -> float:
        return 10.0 * self.w

    @property
    def w2(self) -> float:
        return 1.0 - self.w

    @property
    def state_dim(self) -> int:
        return 2 * self.channel.n_antennas + 2


@dataclass
class UserState:
    buffer_bits: float        # backlog B >= 0
    phi_prev: float           # last slot's ZF power ratio, 1.0 before any feedback
    channel: UserChannel


@dataclass(frozen=True)
class PowerAction:
    p_l: float
    p_o: float

    @classmethod
    def clipped(cls, p_l: float, p_o: float, cfg: EnvConfig) -> "PowerAction":
        return cls(
            p_l=float(np.clip(p_l, 0.0, cfg.p_l_max)),
            p_o=float(np.clip(p_o, 0.0, cfg.p_o_max)),
        )

    @property
    def total(self) -> float:
        return self.p_l + self.p_o


@dataclass
class StepMetrics:
    reward: float
    power_total: float   # W
    buffer_bits: float   # slot-start backlog, the one charged by the reward
    d_l: float           # bits served locally this slot
    d_o: float           # bits offloaded this slot
    arrival: float       # bits arrived this slot


def local_bits(p_l: float, cfg: EnvConfig) -> float:
    """Bits served locally in one slot: tau0 (p_l / kappa)^{1/3} / L."""
    return cfg.channel.tau0 * (p_l / cfg.kappa) ** (1.0 / 3.0) / cfg.cycles_per_bit


def max_cpu_frequency(cfg: EnvConfig) -> float:
    """Peak DVFS frequency (P_l / kappa)^{1/3} in Hz."""
    return (cfg.p_l_max / cfg.kappa) ** (1.0 / 3.0)


def offload_bits(gamma: float, cfg: EnvConfig) -> float:
    """Bits offloaded in one slot: tau0 W log2(1 + gamma)."""
    return cfg.channel.tau0 * cfg.bandwidth * np.log2(1.0 + gamma)


def update_buffer(B: float, d_l: float, d_o: float, arrival: float) -> float:
    """Next backlog max(B - d_l - d_o, 0) + arrival."""
    return max(B - d_l - d_o, 0.0) + arrival


def sample_arrival(lambda_m: float, tau0: float, rng: np.random.Generator) -> int:
    """Task bits arriving in one slot, Poisson with mean lambda_m tau0."""
    if lambda_m < 0:
        raise ValueError(f"arrival rate must be >= 0, got {lambda_m}")
    if lambda_m == 0:
        return 0
    return int(rng.poisson(lambda_m * tau0))


def reward(action: PowerAction, buffer_bits: float, cfg: EnvConfig) -> float:
    """Negative weighted cost of power and backlog (backlog in kilobits)."""
    return -cfg.w1 * action.total - cfg.w2 * (buffer_bits / 1000.0)


def encode_state(state: UserState, cfg: EnvConfig, user: int) -> np.ndarray:
    """Feature vector [B_norm, phi_prev, re(h)/s_ref..., im(h)/s_ref...].

    Scales are chosen so every feature is O(1) at the nominal operating
    point: backlog against 100 mean slot arrivals, channel entries against
    the base-distance standard deviation s_ref.
    """
    ch = cfg.channel
    s_ref = np.sqrt(ch.h0 * (ch.d0 / cfg.base_distance) ** ch.alpha)
    denom = cfg.arrival_rates[user] * ch.tau0 * 100.0
    if denom == 0.0:
        denom = 1.0  # idle user: backlog stays 0, any scale works
    h = state.channel.h
    out = np.empty(2 * ch.n_antennas + 2)
    out[0] = state.buffer_bits / denom
    out[1] = state.phi_prev
    out[2 : 2 + ch.n_antennas] = h.real / s_ref
    out[2 + ch.n_antennas :] = h.imag / s_ref
    return out


def user_seed_seqs(seed: int, n_users: int) -> list[np.random.SeedSequence]:
    """Per-user seed sequences derived from one root seed (reproducible)."""
    return np.random.SeedSequence(seed).spawn(n_users)


class MecEnv:
    """The shared slot-synchronous environment for M users.

    Every user draws arrivals, mobility and channel innovations from its own
    ``numpy`` generator, so per-user randomness is independent of the number
    of users and of other users' actions.
    """

    def __init__(
        self,
        cfg: EnvConfig,
        seed: int | None = None,
        user_seqs: list[np.random.SeedSequence] | None = None,
    ):
        self.cfg = cfg
        if user_seqs is None:
            if seed is None:
                raise ValueError("provide a seed or explicit per-user seed sequences")
            user_seqs = user_seed_seqs(seed, cfg.n_users)
        if len(user_seqs) != cfg.n_users:
            raise ValueError(f"need {cfg.n_users} seed sequences, got {len(user_seqs)}")
        self.user_rngs = [np.random.default_rng(sq) for sq in user_seqs]
        self.states: list[UserState] | None = None
        self.t = 0

    def reset(self) -> list[UserState]:
        """Start an episode: empty buffers, fresh channels at base distances."""
        self.t = 0
        self.states = [
            UserState(
                buffer_bits=0.0,
                phi_prev=1.0,
                channel=init_channel(self.cfg.channel, self.cfg.base_distance, rng),
            )
            for rng in self.user_rngs
        ]
        return self.states

    def step(self, actions: list[PowerAction]) -> tuple[list[UserState], list[StepMetrics], bool]:
        """Advance one slot given every user's (pre-clipped) power action.

        Slot order: ZF detection at current channels, service, arrivals,
        buffer update, reward on the slot-start backlog, then mobility and
        channel evolution for the next slot.
        """
        if self.states is None:
            raise RuntimeError("call reset() before step()")
        cfg = self.cfg
        M = cfg.n_users
        if len(actions) != M:
            raise ValueError(f"expected {M} actions, got {len(actions)}")

        p_o = np.array([a.p_o for a in actions])
        zf: ZfReport = compute_zf([s.channel for s in self.states], p_o, cfg.channel)

        next_states: list[UserState] = []
        metrics: list[StepMetrics] = []
        for m in range(M):
            s, a, rng = self.states[m], actions[m], self.user_rngs[m]
            d_l = local_bits(a.p_l, cfg)
            d_o = offload_bits(zf.gamma[m], cfg)
            arrival = sample_arrival(cfg.arrival_rates[m], cfg.channel.tau0, rng)
            b_next = update_buffer(s.buffer_bits, d_l, d_o, arrival)
            r = reward(a, s.buffer_bits, cfg)
            ch = step_mobility(s.channel, rng)
            ch = evolve_channel(ch, cfg.channel, rng)
            next_states.append(
                UserState(buffer_bits=b_next, phi_prev=float(zf.phi[m]), channel=ch)
            )
            metrics.append(
                StepMetrics(
                    reward=r,
                    power_total=a.total,
                    buffer_bits=s.buffer_bits,
                    d_l=d_l,
                    d_o=d_o,
                    arrival=arrival,
                )
            )

        self.states = next_states
        self.t += 1
        done = self.t >= cfg.t_max
        return next_states, metrics, done
