"""Replay buffer, exploration noise, and the DDPG / TD3 agents.

One agent per user, no weight sharing and no shared replay: every agent sees
only its own local state and reward.  Both agents act through a tanh head
mapped affinely onto [0, P_l] x [0, P_o]; during training, Ornstein-Uhlenbeck
noise scaled by the action half-range is added before clipping.

TD3 differs from DDPG in three ways: clipped double-Q targets
(min over two critics), Gaussian smoothing noise on the target action, and
actor/target updates only every ``update_every`` critic updates.
"""

from dataclasses import dataclass

import numpy as np

from .nets import Adam, Mlp, soft_update


@dataclass
class AgentConfig:
    discount: float = 0.99
    tau: float = 0.001            # soft target-update rate
    batch_size: int = 64
    warmup: int = 1000            # transitions stored before updates begin
    updates_per_step: int = 1
    replay_capacity: int = 250_000
    lr_actor: float = 1e-4
    lr_critic: float = 1e-3
    hidden_dims: tuple = (256, 128)
    ou_theta: float = 0.15        # exploration noise mean-reversion rate
    ou_sigma: float = 0.12        # exploration noise volatility
    # TD3 only
    update_every: int = 2         # critic updates per actor/target update
    target_noise: float = 0.1     # smoothing sigma, fraction of action range
    target_noise_clip: float = 0.25  # clip bound c, fraction of action range

    def __post_init__(self):
        self.hidden_dims = tuple(int(d) for d in self.hidden_dims)
        if not 0.0 <= self.discount < 1.0:
            raise ValueError(f"discount must be in [0, 1), got {self.discount}")
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")
        if self.update_every < 1:
            raise ValueError("update_every must be >= 1")
        if self.replay_capacity < 1:
            raise ValueError("replay_capacity must be >= 1")


class ReplayBuffer:
    """Fixed-capacity FIFO transition store with uniform sampling (with replacement)."""

    def __init__(self, capacity: int, state_dim: int, action_dim: int):
        self.capacity = int(capacity)
        self.s = np.zeros((self.capacity, state_dim))
        self.a = np.zeros((self.capacity, action_dim))
        self.r = np.zeros(self.capacity)
        self.s2 = np.zeros((self.capacity, state_dim))
        self.d = np.zeros(self.capacity)
        self.size = 0
        self.cursor = 0

    def push(self, s, a, r, s2, d):
        i = self.cursor
        self.s[i] = s
        self.a[i] = a
        self.r[i] = r
        self.s2[i] = s2
        self.d[i] = d
        self.cursor = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, k: int, rng: np.random.Generator) -> dict:
        if self.size < k:
            raise ValueError(f"cannot sample {k} transitions from buffer of size {self.size}")
        idx = rng.integers(0, self.size, size=k)
        return {
            "s": self.s[idx],
            "a": self.a[idx],
            "r": self.r[idx],
            "s2": self.s2[idx],
            "d": self.d[idx],
        }


class OuNoise:
    """Mean-reverting exploration noise: x += theta (0 - x) + sigma xi, unit step."""

    def __init__(self, dim: int, theta: float = 0.15, sigma: float = 0.12):
        self.dim = dim
        self.theta = theta
        self.sigma = sigma
        self.x = np.zeros(dim)

    def reset(self):
        self.x = np.zeros(self.dim)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        self.x = self.x + self.theta * (0.0 - self.x) + self.sigma * rng.standard_normal(self.dim)
        return self.x.copy()


class _ActorCriticBase:
    """Action bounds, tanh-to-power mapping, and exploration shared by both agents."""

    def __init__(self, state_dim, action_low, action_high, cfg: AgentConfig, rng):
        self.state_dim = int(state_dim)
        self.low = np.asarray(action_low, dtype=np.float64)
        self.high = np.asarray(action_high, dtype=np.float64)
        self.action_dim = self.low.shape[0]
        self.half_range = (self.high - self.low) / 2.0
        self.cfg = cfg
        self.rng = rng
        self.noise = OuNoise(self.action_dim, theta=cfg.ou_theta, sigma=cfg.ou_sigma)

    def _map_action(self, u):
        return self.low + (u + 1.0) * self.half_range

    def reset_noise(self):
        self.noise.reset()

    def act(self, s: np.ndarray, explore: bool) -> np.ndarray:
        """Deterministic policy output, plus clipped OU noise when exploring."""
        u, _ = self.actor.forward(s)
        a = self._map_action(u)
        if explore:
            a = a + self.noise.sample(self.rng) * self.half_range
        return np.clip(a, self.low, self.high)

    def _critic_regress(self, critic, opt, s, a, y):
        q, cache = critic.forward(np.hstack([s, a]))
        err = q[:, 0] - y
        grad_y = (2.0 / err.shape[0]) * err[:, None]
        grads, _ = critic.backward(cache, grad_y)
        opt.step(critic.params(), grads)
        return float(np.mean(err * err))

    def _actor_ascend(self, critic, s):
        """One policy gradient step maximizing mean Q(s, mu(s)) through ``critic``."""
        u, acache = self.actor.forward(s)
        a_pi = self._map_action(u)
        q_pi, ccache = critic.forward(np.hstack([s, a_pi]))
        grad_q = np.full((s.shape[0], 1), -1.0 / s.shape[0])
        _, grad_in = critic.backward(ccache, grad_q, with_param_grads=False)
        grad_a = grad_in[:, self.state_dim :] * self.half_range
        agrads, _ = self.actor.backward(acache, grad_a)
        self.actor_opt.step(self.actor.params(), agrads)
        return float(np.mean(q_pi))


class DdpgAgent(_ActorCriticBase):
    algo = "ddpg"

    def __init__(self, state_dim, action_low, action_high, cfg: AgentConfig, rng):
        super().__init__(state_dim, action_low, action_high, cfg, rng)
        hid = list(cfg.hidden_dims)
        self.actor = Mlp([self.state_dim, *hid, self.action_dim], "tanh", rng)
        self.critic = Mlp([self.state_dim + self.action_dim, *hid, 1], "identity", rng)
        self.target_actor = self.actor.copy()
        self.target_critic = self.critic.copy()
        self.actor_opt = Adam(self.actor.params(), cfg.lr_actor)
        self.critic_opt = Adam(self.critic.params(), cfg.lr_critic)

    def networks(self):
        return [self.actor, self.critic, self.target_actor, self.target_critic]

    def update(self, buffer: ReplayBuffer) -> dict:
        return self.update_batch(buffer.sample(self.cfg.batch_size, self.rng))

    def update_batch(self, batch: dict) -> dict:
        cfg = self.cfg
        s, a, r, s2, d = batch["s"], batch["a"], batch["r"], batch["s2"], batch["d"]
        u2, _ = self.target_actor.forward(s2)
        a2 = self._map_action(u2)
        q2, _ = self.target_critic.forward(np.hstack([s2, a2]))
        y = r + cfg.discount * (1.0 - d) * q2[:, 0]

        critic_loss = self._critic_regress(self.critic, self.critic_opt, s, a, y)
        actor_q = self._actor_ascend(self.critic, s)
        soft_update(self.target_actor, self.actor, cfg.tau)
        soft_update(self.target_critic, self.critic, cfg.tau)
        return {"td_target": y, "critic_loss": critic_loss, "actor_q": actor_q}


class Td3Agent(_ActorCriticBase):
    algo = "td3"

    def __init__(self, state_dim, action_low, action_high, cfg: AgentConfig, rng):
        super().__init__(state_dim, action_low, action_high, cfg, rng)
        hid = list(cfg.hidden_dims)
        self.actor = Mlp([self.state_dim, *hid, self.action_dim], "tanh", rng)
        # independently initialized twin critics
        self.critic1 = Mlp([self.state_dim + self.action_dim, *hid, 1], "identity", rng)
        self.critic2 = Mlp([self.state_dim + self.action_dim, *hid, 1], "identity", rng)
        self.target_actor = self.actor.copy()
        self.target_critic1 = self.critic1.copy()
        self.target_critic2 = self.critic2.copy()
        self.actor_opt = Adam(self.actor.params(), cfg.lr_actor)
        self.critic1_opt = Adam(self.critic1.params(), cfg.lr_critic)
        self.critic2_opt = Adam(self.critic2.params(), cfg.lr_critic)
        self.update_count = 0
        self.actor_update_count = 0

    def networks(self):
        return [
            self.actor,
            self.critic1,
            self.critic2,
            self.target_actor,
            self.target_critic1,
            self.target_critic2,
        ]

    def smoothed_target_action(self, s2: np.ndarray) -> np.ndarray:
        """Target-policy action with clipped Gaussian smoothing noise, in power space."""
        cfg = self.cfg
        u2, _ = self.target_actor.forward(s2)
        a2 = self._map_action(u2)
        action_range = self.high - self.low
        eps = self.rng.normal(0.0, 1.0, size=a2.shape) * (cfg.target_noise * action_range)
        clip_abs = cfg.target_noise_clip * action_range
        eps = np.clip(eps, -clip_abs, clip_abs)
        return np.clip(a2 + eps, self.low, self.high)

    def update(self, buffer: ReplayBuffer) -> dict:
        return self.update_batch(buffer.sample(self.cfg.batch_size, self.rng))

    def update_batch(self, batch: dict) -> dict:
        cfg = self.cfg
        s, a, r, s2, d = batch["s"], batch["a"], batch["r"], batch["s2"], batch["d"]
        a2 = self.smoothed_target_action(s2)
        sa2 = np.hstack([s2, a2])
        q1t, _ = self.target_critic1.forward(sa2)
        q2t, _ = self.target_critic2.forward(sa2)
        y = r + cfg.discount * (1.0 - d) * np.minimum(q1t[:, 0], q2t[:, 0])

        loss1 = self._critic_regress(self.critic1, self.critic1_opt, s, a, y)
        loss2 = self._critic_regress(self.critic2, self.critic2_opt, s, a, y)

        self.update_count += 1
        actor_q = None
        if self.update_count % cfg.update_every == 0:
            actor_q = self._actor_ascend(self.critic1, s)
            soft_update(self.target_actor, self.actor, cfg.tau)
            soft_update(self.target_critic1, self.critic1, cfg.tau)
            soft_update(self.target_critic2, self.critic2, cfg.tau)
            self.actor_update_count += 1
        return {
            "td_target": y,
            "target_action": a2,
            "critic_loss": (loss1 + loss2) / 2.0,
            "actor_q": actor_q,
        }


def make_agent(algo: str, state_dim, action_low, action_high, cfg: AgentConfig, rng):
    if algo == "ddpg":
        return DdpgAgent(state_dim, action_low, action_high, cfg, rng)
    if algo == "td3":
        return Td3Agent(state_dim, action_low, action_high, cfg, rng)
    raise ValueError(f"unknown algorithm {algo!r}")
