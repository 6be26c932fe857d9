"""Self-describing binary checkpoints for trained agents.

Layout (all integers little-endian):

    magic   6 bytes  b"MECRL1"
    algo    u8 length + ascii tag ("ddpg" | "td3")
    count   u8 number of networks
    per network:
        act     u8 output activation (0 identity, 1 tanh)
        ndims   u8
        dims    u32 * ndims
        params  f64: per layer, weights row-major then biases

Network order is fixed per algorithm (DDPG: actor, critic, target actor,
target critic; TD3: actor, critic1, critic2, then the three targets), so a
round trip reproduces bit-identical forward passes.  Optimizer moments are
not persisted.
"""

import dataclasses
import struct

import numpy as np

from .agents import AgentConfig, DdpgAgent, Td3Agent
from .env import EnvConfig
from .nets import Mlp

MAGIC = b"MECRL1"
_ACT_TAGS = {"identity": 0, "tanh": 1}
_ACT_NAMES = {v: k for k, v in _ACT_TAGS.items()}


class CorruptCheckpointError(ValueError):
    """Checkpoint bytes do not match the expected layout."""


def _pack_net(net: Mlp) -> bytes:
    parts = [struct.pack("<BB", _ACT_TAGS[net.output_activation], len(net.dims))]
    parts.append(struct.pack(f"<{len(net.dims)}I", *net.dims))
    for W, b in zip(net.weights, net.biases):
        parts.append(np.ascontiguousarray(W, dtype="<f8").tobytes())
        parts.append(np.ascontiguousarray(b, dtype="<f8").tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.blob):
            raise CorruptCheckpointError(
                f"truncated checkpoint: wanted {n} bytes at offset {self.pos}, "
                f"file has {len(self.blob)}"
            )
        out = self.blob[self.pos : self.pos + n]
        self.pos += n
        return out


def _unpack_net(r: _Reader) -> Mlp:
    act_tag, ndims = struct.unpack("<BB", r.take(2))
    if act_tag not in _ACT_NAMES or ndims < 2:
        raise CorruptCheckpointError(f"bad network header (act={act_tag}, ndims={ndims})")
    dims = struct.unpack(f"<{ndims}I", r.take(4 * ndims))
    net = Mlp(dims, _ACT_NAMES[act_tag])
    for i, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        net.weights[i] = np.frombuffer(r.take(8 * fan_in * fan_out), dtype="<f8").reshape(
            fan_in, fan_out
        ).copy()
        net.biases[i] = np.frombuffer(r.take(8 * fan_out), dtype="<f8").copy()
    return net


def save_checkpoint(agent, path) -> None:
    nets = agent.networks()
    algo = agent.algo.encode("ascii")
    parts = [MAGIC, struct.pack("<B", len(algo)), algo, struct.pack("<B", len(nets))]
    parts.extend(_pack_net(n) for n in nets)
    with open(path, "wb") as f:
        f.write(b"".join(parts))


def load_checkpoint(path, env_cfg: EnvConfig, agent_cfg: AgentConfig):
    """Rebuild an agent from a checkpoint, taking action bounds from ``env_cfg``.

    The stored layer widths win over ``agent_cfg.hidden_dims``; optimizer
    state starts fresh.
    """
    with open(path, "rb") as f:
        r = _Reader(f.read())
    if r.take(len(MAGIC)) != MAGIC:
        raise CorruptCheckpointError(f"bad magic in {path}")
    (alen,) = struct.unpack("<B", r.take(1))
    algo = r.take(alen).decode("ascii", errors="replace")
    (count,) = struct.unpack("<B", r.take(1))
    expected = {"ddpg": 4, "td3": 6}.get(algo)
    if expected is None:
        raise CorruptCheckpointError(f"unknown algo tag {algo!r}")
    if count != expected:
        raise CorruptCheckpointError(f"{algo} checkpoint must hold {expected} networks, got {count}")
    nets = [_unpack_net(r) for _ in range(count)]
    if r.pos != len(r.blob):
        raise CorruptCheckpointError(f"{len(r.blob) - r.pos} trailing bytes in {path}")

    actor = nets[0]
    state_dim = actor.dims[0]
    hidden = tuple(actor.dims[1:-1])
    cfg = dataclasses.replace(agent_cfg, hidden_dims=hidden)
    low = np.zeros(2)
    high = np.array([env_cfg.p_l_max, env_cfg.p_o_max])
    cls = DdpgAgent if algo == "ddpg" else Td3Agent
    agent = cls(state_dim, low, high, cfg, np.random.default_rng(0))
    own = agent.networks()
    for mine, stored in zip(own, nets):
        if mine.dims != stored.dims or mine.output_activation != stored.output_activation:
            raise CorruptCheckpointError(
                f"network shape {stored.dims}/{stored.output_activation} does not fit "
                f"a {algo} agent for this configuration"
            )
        mine.weights = [w.copy() for w in stored.weights]
        mine.biases = [b.copy() for b in stored.biases]
    return agent
