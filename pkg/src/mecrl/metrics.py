"""Per-episode metric persistence and the DDPG-vs-TD3 comparison table."""

import csv
from dataclasses import dataclass

from .training import EpisodeRecord

METRICS_HEADER = ("episode", "user", "algo", "seed", "avg_reward", "avg_power_w", "avg_delay_kbit")
TRACE_HEADER = ("episode", "step", "user", "reward", "p_l", "p_o", "buffer_bits", "d_l", "d_o", "arrival")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def write_metrics(records, path) -> None:
    """CSV with one row per (episode, user), floats at 6 significant digits."""
    rows = sorted(records, key=lambda r: (r.episode, r.user, r.seed))
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f)
        w.writerow(METRICS_HEADER)
        for r in rows:
            w.writerow(
                [r.episode, r.user, r.algo, r.seed, _fmt(r.avg_reward), _fmt(r.avg_power), _fmt(r.avg_delay)]
            )


def read_metrics(path) -> list:
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = tuple(next(reader))
        if header != METRICS_HEADER:
            raise ValueError(f"unexpected metrics header {header}")
        return [
            EpisodeRecord(
                episode=int(row[0]),
                user=int(row[1]),
                algo=row[2],
                seed=int(row[3]),
                avg_reward=float(row[4]),
                avg_power=float(row[5]),
                avg_delay=float(row[6]),
            )
            for row in reader
        ]


def write_trace(trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f)
        w.writerow(TRACE_HEADER)
        for r in trace:
            w.writerow(
                [r.episode, r.step, r.user, _fmt(r.reward), _fmt(r.p_l), _fmt(r.p_o),
                 _fmt(r.buffer_bits), _fmt(r.d_l), _fmt(r.d_o), _fmt(r.arrival)]
            )


@dataclass
class SummaryCell:
    ddpg: float
    td3: float
    winner: str | None  # "ddpg" | "td3" | None on a tie

    @staticmethod
    def of(ddpg: float, td3: float, higher_is_better: bool) -> "SummaryCell":
        if ddpg == td3:
            return SummaryCell(ddpg, td3, None)
        td3_wins = (td3 > ddpg) if higher_is_better else (td3 < ddpg)
        return SummaryCell(ddpg, td3, "td3" if td3_wins else "ddpg")


METRIC_SPECS = (("avg_reward", True), ("avg_power", False), ("avg_delay", False))


def _tail_means(records, tail_fraction: float) -> dict:
    """Per-user means of each metric over the final tail of episodes (all seeds pooled)."""
    n_episodes = max(r.episode for r in records) + 1
    tail_count = max(1, round(n_episodes * tail_fraction))
    cutoff = n_episodes - tail_count
    users = sorted({r.user for r in records})
    out = {}
    for u in users:
        tail = [r for r in records if r.user == u and r.episode >= cutoff]
        out[u] = {
            name: sum(getattr(r, name) for r in tail) / len(tail) for name, _ in METRIC_SPECS
        }
    return out


def summarize(ddpg_records, td3_records, tail_fraction: float = 0.25) -> dict:
    """Per-user comparison grid over the final ``tail_fraction`` of episodes.

    Returns {user: {metric: SummaryCell}}.  Both runs must cover the same
    episode range and user set.
    """
    if not ddpg_records or not td3_records:
        raise ValueError("need records for both algorithms")
    n_d = max(r.episode for r in ddpg_records) + 1
    n_t = max(r.episode for r in td3_records) + 1
    if n_d != n_t:
        raise ValueError(f"episode counts differ: ddpg={n_d}, td3={n_t}")
    means_d = _tail_means(ddpg_records, tail_fraction)
    means_t = _tail_means(td3_records, tail_fraction)
    if means_d.keys() != means_t.keys():
        raise ValueError("user sets differ between the two runs")
    return {
        u: {
            name: SummaryCell.of(means_d[u][name], means_t[u][name], hib)
            for name, hib in METRIC_SPECS
        }
        for u in means_d
    }


def format_summary(summary: dict) -> str:
    """Human-readable grid: reward up, power and delay down; * marks the winner."""
    titles = {
        "avg_reward": "avg reward (up)",
        "avg_power": "avg power W (down)",
        "avg_delay": "avg delay kbit (down)",
    }
    lines = []
    head = f"{'':8s}" + "".join(f"{titles[n]:>28s}" for n, _ in METRIC_SPECS)
    sub = f"{'':8s}" + "".join(f"{'DDPG':>14s}{'TD3':>14s}" for _ in METRIC_SPECS)
    lines.append(head)
    lines.append(sub)
    for u, cells in sorted(summary.items()):
        row = f"user {u:<3d}"
        for name, _ in METRIC_SPECS:
            c = cells[name]
            d_mark = "*" if c.winner == "ddpg" else " "
            t_mark = "*" if c.winner == "td3" else " "
            row += f"{_fmt(c.ddpg):>13s}{d_mark}{_fmt(c.td3):>13s}{t_mark}"
        lines.append(row)
    return "\n".join(lines)
