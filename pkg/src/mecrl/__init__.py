"""Multi-user MEC uplink simulator with decentralized DDPG/TD3 power allocation.

Library surface:

- :mod:`mecrl.numerics` -- complex linear algebra, sampling, Bessel J0
- :mod:`mecrl.channel` -- Gauss-Markov fading, mobility, zero-forcing SINR
- :mod:`mecrl.env` -- task buffers, local/offload service, rewards, the slot step
- :mod:`mecrl.nets` -- dense networks with analytic gradients and Adam
- :mod:`mecrl.agents` -- replay, OU exploration, DDPG and TD3
- :mod:`mecrl.training` -- the decentralized training loop
- :mod:`mecrl.cli` -- train / compare / validate / replay commands
"""

from .agents import AgentConfig, DdpgAgent, OuNoise, ReplayBuffer, Td3Agent
from .channel import ChannelParams, UserChannel, ZfReport, compute_zf
from .config import ConfigError, RunConfig, load_config, save_config
from .env import EnvConfig, MecEnv, PowerAction, StepMetrics, UserState
from .metrics import format_summary, read_metrics, summarize, write_metrics
from .nets import Adam, Mlp, soft_update
from .training import EpisodeRecord, TrainResult, evaluate_run, train_run

__version__ = "0.1.0"

__all__ = [
    "Adam",
    "AgentConfig",
    "ChannelParams",
    "ConfigError",
    "DdpgAgent",
    "EnvConfig",
    "EpisodeRecord",
    "MecEnv",
    "Mlp",
    "OuNoise",
    "PowerAction",
    "ReplayBuffer",
    "RunConfig",
    "StepMetrics",
    "Td3Agent",
    "TrainResult",
    "UserChannel",
    "UserState",
    "ZfReport",
    "compute_zf",
    "evaluate_run",
    "format_summary",
    "load_config",
    "read_metrics",
    "save_config",
    "soft_update",
    "summarize",
    "train_run",
    "write_metrics",
    "__version__",
]
