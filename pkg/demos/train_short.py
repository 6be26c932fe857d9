"""A short decentralized training run, then a greedy evaluation.

Eighty episodes with small networks, two updates per step, and equal
actor/critic learning rates is enough to reach a sensible policy. The
full-scale comparison lives behind the CLI:

    mecrl compare --seeds 0,1,2 --episodes 300 --out runs/compare \
        --override agent.hidden_dims=[64,48] \
        --override agent.updates_per_step=2 --override agent.lr_actor=0.001
"""

import numpy as np

from mecrl.agents import AgentConfig
from mecrl.env import EnvConfig
from mecrl.training import evaluate_run, train_run

env_cfg = EnvConfig(t_max=200)
agent_cfg = AgentConfig(hidden_dims=(48, 32), updates_per_step=2, lr_actor=1e-3)

print("training td3, 3 users, 80 episodes x 200 slots (two-ish minutes)...")
res = train_run(env_cfg, agent_cfg, "td3", seed=0, episodes=80)

print(f"\n{'episodes':>10} {'user0':>8} {'user1':>8} {'user2':>8}   (mean training reward per block)")
for lo in range(0, 80, 10):
    block = [r for r in res.records if lo <= r.episode < lo + 10]
    row = [np.mean([r.avg_reward for r in block if r.user == u]) for u in range(3)]
    print(f"{lo:>4}-{lo + 9:<5} {row[0]:8.2f} {row[1]:8.2f} {row[2]:8.2f}")

print("\ngreedy evaluation (no exploration noise), 5 episodes:")
ev = evaluate_run(res.agents, env_cfg, seed=99, episodes=5)
for u in range(3):
    mine = [r for r in ev if r.user == u]
    print(f"user {u}: reward {np.mean([r.avg_reward for r in mine]):6.2f}   "
          f"power {np.mean([r.avg_power for r in mine]):.3f} W   "
          f"delay {np.mean([r.avg_delay for r in mine]):6.2f} kbit")
