"""Decentralized training loop: M independent agents on the shared environment.

Seeding layout: one root seed fans out into an environment branch (per-user
arrival/channel streams) and an agent branch (per-agent init, exploration,
batch sampling).  The environment branch depends only on the run seed, never
on the algorithm, so DDPG and TD3 comparisons see identical channel and
arrival sequences and differ only through action feedback.

Episodes truncate at t_max with no terminal state (the queueing process is
infinite-horizon), so stored transitions always carry d = 0 and targets
always bootstrap.
"""

from dataclasses import dataclass

import numpy as np

from .agents import AgentConfig, ReplayBuffer, make_agent
from .env import EnvConfig, MecEnv, PowerAction, encode_state


@dataclass
class EpisodeRecord:
    episode: int
    user: int
    algo: str
    seed: int
    avg_reward: float
    avg_power: float   # W, mean of p_l + p_o over the episode
    avg_delay: float   # kbit, mean slot-start backlog (queue-length delay proxy)


@dataclass
class TraceRow:
    episode: int
    step: int
    user: int
    reward: float
    p_l: float
    p_o: float
    buffer_bits: float
    d_l: float
    d_o: float
    arrival: float


@dataclass
class TrainResult:
    records: list       # one EpisodeRecord per (episode, user)
    agents: list
    buffers: list       # per-agent ReplayBuffer
    trace: list         # TraceRows when collect_trace was set


def _spawn_streams(seed: int, n_users: int):
    env_ss, agent_ss = np.random.SeedSequence(seed).spawn(2)
    return env_ss.spawn(n_users), agent_ss.spawn(n_users)


def build_agents(algo: str, env_cfg: EnvConfig, agent_cfg: AgentConfig, seqs):
    low = np.zeros(2)
    high = np.array([env_cfg.p_l_max, env_cfg.p_o_max])
    return [
        make_agent(algo, env_cfg.state_dim, low, high, agent_cfg, np.random.default_rng(sq))
        for sq in seqs
    ]


def train_run(
    env_cfg: EnvConfig,
    agent_cfg: AgentConfig,
    algo: str,
    seed: int,
    episodes: int,
    collect_trace: bool = False,
    progress=None,
) -> TrainResult:
    """Train M agents for ``episodes`` episodes.

    ``progress``, if given, is called with (episode_index, records_so_far).
    """
    M = env_cfg.n_users
    env_seqs, agent_seqs = _spawn_streams(seed, M)
    env = MecEnv(env_cfg, user_seqs=env_seqs)
    agents = build_agents(algo, env_cfg, agent_cfg, agent_seqs)
    buffers = [ReplayBuffer(agent_cfg.replay_capacity, env_cfg.state_dim, 2) for _ in range(M)]

    records: list[EpisodeRecord] = []
    trace: list[TraceRow] = []
    for ep in range(episodes):
        states = env.reset()
        for ag in agents:
            ag.reset_noise()
        enc = [encode_state(states[m], env_cfg, m) for m in range(M)]
        sums = np.zeros((M, 3))  # reward, power, backlog kbit
        for t in range(env_cfg.t_max):
            raw = [agents[m].act(enc[m], explore=True) for m in range(M)]
            actions = [PowerAction(float(a[0]), float(a[1])) for a in raw]
            states, mets, _ = env.step(actions)
            enc2 = [encode_state(states[m], env_cfg, m) for m in range(M)]
            for m in range(M):
                # truncation is not termination: always bootstrap (d = 0)
                buffers[m].push(enc[m], raw[m], mets[m].reward, enc2[m], 0.0)
                sums[m, 0] += mets[m].reward
                sums[m, 1] += mets[m].power_total
                sums[m, 2] += mets[m].buffer_bits / 1000.0
                if collect_trace:
                    trace.append(
                        TraceRow(
                            episode=ep,
                            step=t,
                            user=m,
                            reward=mets[m].reward,
                            p_l=actions[m].p_l,
                            p_o=actions[m].p_o,
                            buffer_bits=mets[m].buffer_bits,
                            d_l=mets[m].d_l,
                            d_o=mets[m].d_o,
                            arrival=mets[m].arrival,
                        )
                    )
            update_floor = max(agent_cfg.warmup, agent_cfg.batch_size)
            for m in range(M):
                if buffers[m].size >= update_floor:
                    for _ in range(agent_cfg.updates_per_step):
                        agents[m].update(buffers[m])
            enc = enc2
        means = sums / env_cfg.t_max
        for m in range(M):
            records.append(
                EpisodeRecord(
                    episode=ep,
                    user=m,
                    algo=algo,
                    seed=seed,
                    avg_reward=float(means[m, 0]),
                    avg_power=float(means[m, 1]),
                    avg_delay=float(means[m, 2]),
                )
            )
        if progress is not None:
            progress(ep, records)
    return TrainResult(records=records, agents=agents, buffers=buffers, trace=trace)


def _matrix_worker(job):
    env_cfg, agent_cfg, algo, seed, episodes = job
    return (algo, seed), train_run(env_cfg, agent_cfg, algo, seed, episodes).records


def train_matrix(env_cfg, agent_cfg, algos, seeds, episodes, jobs=1):
    """Train every (algo, seed) combination; returns {(algo, seed): records}.

    Runs are fully independent (per-run seeding), so with ``jobs`` > 1 they
    execute in worker processes; results are identical either way.
    """
    todo = [(env_cfg, agent_cfg, algo, seed, episodes) for algo in algos for seed in seeds]
    if jobs <= 1:
        return dict(_matrix_worker(job) for job in todo)
    import multiprocessing as mp

    with mp.get_context("fork").Pool(processes=min(jobs, len(todo))) as pool:
        return dict(pool.map(_matrix_worker, todo))


def evaluate_run(agents, env_cfg: EnvConfig, seed: int, episodes: int):
    """Greedy rollouts of trained agents (no exploration, no updates)."""
    M = env_cfg.n_users
    env_seqs, _ = _spawn_streams(seed, M)
    env = MecEnv(env_cfg, user_seqs=env_seqs)
    algo = agents[0].algo
    records: list[EpisodeRecord] = []
    for ep in range(episodes):
        states = env.reset()
        enc = [encode_state(states[m], env_cfg, m) for m in range(M)]
        sums = np.zeros((M, 3))
        for _ in range(env_cfg.t_max):
            raw = [agents[m].act(enc[m], explore=False) for m in range(M)]
            actions = [PowerAction(float(a[0]), float(a[1])) for a in raw]
            states, mets, _ = env.step(actions)
            enc = [encode_state(states[m], env_cfg, m) for m in range(M)]
            for m in range(M):
                sums[m, 0] += mets[m].reward
                sums[m, 1] += mets[m].power_total
                sums[m, 2] += mets[m].buffer_bits / 1000.0
        means = sums / env_cfg.t_max
        for m in range(M):
            records.append(
                EpisodeRecord(
                    episode=ep,
                    user=m,
                    algo=algo,
                    seed=seed,
                    avg_reward=float(means[m, 0]),
                    avg_power=float(means[m, 1]),
                    avg_delay=float(means[m, 2]),
                )
            )
    return records
