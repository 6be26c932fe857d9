"""Run configuration: nested dataclasses, JSON round trip, dotted-path overrides.

The defaults reproduce the reference experiment: 1 ms slots, -30 dB path loss
at 1 m with exponent 3, correlation 0.95 at 70 Hz Doppler, 1 MHz bandwidth,
1e-9 W noise, 2 W power caps, kappa 1e-27, 500 cycles/bit, 3 users at 100 m
with arrival rates (1.1, 1.0, 0.9) Mbps, balance factor 0.8, 200-step
episodes, 2000 episodes, OU(0.15, 0.12), replay capacity 2.5e5.
"""

import dataclasses
import json
from dataclasses import dataclass, field

from .agents import AgentConfig
from .channel import ChannelParams
from .env import EnvConfig


class ConfigError(ValueError):
    """Malformed configuration: the message names the offending key."""


@dataclass
class RunConfig:
    env: EnvConfig = field(default_factory=EnvConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    algo: str = "td3"
    seed: int = 0
    episodes: int = 2000
    out_dir: str = "runs"

    def __post_init__(self):
        if self.algo not in ("ddpg", "td3"):
            raise ConfigError(f"algo must be 'ddpg' or 'td3', got {self.algo!r}")
        if self.episodes < 0:
            raise ConfigError(f"episodes must be >= 0, got {self.episodes}")


def to_dict(cfg: RunConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["env"]["arrival_rates"] = list(d["env"]["arrival_rates"])
    d["agent"]["hidden_dims"] = list(d["agent"]["hidden_dims"])
    return d


def _build(cls, data: dict, path: str):
    """Construct a (possibly nested) dataclass, rejecting unknown keys by name."""
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        dotted = f"{path}.{key}" if path else key
        if key not in fields:
            raise ConfigError(f"unknown config key {dotted!r}")
        ftype = fields[key].type
        nested = {"env": EnvConfig, "agent": AgentConfig, "channel": ChannelParams}.get(key)
        if nested is not None:
            if not isinstance(value, dict):
                raise ConfigError(f"config key {dotted!r} must be an object")
            kwargs[key] = _build(nested, value, dotted)
        else:
            kwargs[key] = value
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value under {path or 'config root'!r}: {exc}") from exc


def from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return _build(RunConfig, data, "")


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return from_dict(data)


def save_config(cfg: RunConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_dict(cfg), f, indent=2)
        f.write("\n")


def apply_override(data: dict, assignment: str) -> dict:
    """Apply one ``dotted.key=value`` override to a config dict, in place.

    Values are parsed as JSON when possible (numbers, lists, booleans) and
    fall back to plain strings, so ``env.w=0.0`` and ``algo=td3`` both work.
    """
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    key, raw = assignment.split("=", 1)
    key = key.strip()
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.split(".")
    node = data
    for i, part in enumerate(parts[:-1]):
        if part not in node or not isinstance(node[part], dict):
            raise ConfigError(f"unknown config key {'.'.join(parts[: i + 1])!r}")
        node = node[part]
    if parts[-1] not in node:
        raise ConfigError(f"unknown config key {key!r}")
    node[parts[-1]] = value
    return data
