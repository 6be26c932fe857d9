"""Built-in self checks: quick oracle-backed sanity suite behind ``mecrl validate``.

Each check recomputes a known quantity through an independent route (closed
form, pseudo-inverse, finite differences, replayed recursion) and compares at
a fixed tolerance.  This is a smoke screen for installs; the full test suite
lives in the repository.
"""

import numpy as np

from .agents import AgentConfig, Td3Agent
from .channel import ChannelParams, UserChannel, compute_zf, correlation_from_doppler
from .config import RunConfig
from .env import EnvConfig, MecEnv, PowerAction, max_cpu_frequency
from .nets import Mlp
from .training import train_run


def _random_channels(rng, n, m, var=1e-9):
    H = np.sqrt(var / 2.0) * (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)))
    return [UserChannel(h=H[:, j], base_distance=100.0, cumulative_offset=0.0) for j in range(m)]


def check_cpu_frequency():
    f = max_cpu_frequency(EnvConfig())
    return abs(f - 1.2599e9) < 0.01e9, f"peak DVFS frequency {f / 1e9:.4f} GHz"


def check_doppler_correlation():
    rho = correlation_from_doppler(70.0, 1e-3)
    return 0.9515 <= rho <= 0.9525, f"J0(2 pi 70 Hz 1 ms) = {rho:.6f}"


def check_zero_forcing(n_trials=200):
    """SINR from the inverse-gram diagonal vs explicit pseudo-inverse row norms."""
    rng = np.random.default_rng(7)
    params = ChannelParams()
    worst_rel, worst_delta = 0.0, 0.0
    for _ in range(n_trials):
        chans = _random_channels(rng, params.n_antennas, params.n_users)
        p_o = rng.uniform(0.1, 2.0, params.n_users)
        zf = compute_zf(chans, p_o, params)
        H = np.column_stack([c.h for c in chans])
        pinv = np.linalg.inv(H.conj().T @ H) @ H.conj().T
        gamma_ref = p_o / (params.sigma_r2 * np.sum(np.abs(pinv) ** 2, axis=1))
        worst_rel = max(worst_rel, float(np.max(np.abs(zf.gamma - gamma_ref) / gamma_ref)))
        worst_delta = max(worst_delta, float(np.max(np.abs(pinv @ H - np.eye(params.n_users)))))
    ok = worst_rel < 1e-9 and worst_delta < 1e-9
    return ok, f"max rel err {worst_rel:.2e}, max |g_i^H h_j - delta_ij| {worst_delta:.2e}"


def check_queue_recursion(steps=10):
    """Replay the buffer recursion from logged service and arrivals."""
    cfg = EnvConfig()
    env = MecEnv(cfg, seed=11)
    env.reset()
    rng = np.random.default_rng(3)
    B = np.zeros(cfg.n_users)
    worst = 0.0
    for _ in range(steps):
        actions = [
            PowerAction.clipped(rng.uniform(0, 2), rng.uniform(0, 2), cfg)
            for _ in range(cfg.n_users)
        ]
        states, mets, _ = env.step(actions)
        for m, met in enumerate(mets):
            worst = max(worst, abs(met.buffer_bits - B[m]))
            B[m] = max(B[m] - met.d_l - met.d_o, 0.0) + met.arrival
            worst = max(worst, abs(states[m].buffer_bits - B[m]))
    return worst == 0.0, f"max replay deviation {worst:.3e} bits"


def check_gradients(n_coords=60):
    """Analytic backprop vs central finite differences on tanh and linear heads."""
    rng = np.random.default_rng(5)
    worst = 0.0
    for out_act, dims in (("tanh", [10, 16, 8, 2]), ("identity", [12, 16, 8, 1])):
        net = Mlp(dims, out_act, rng)
        x = rng.standard_normal((4, dims[0]))
        wvec = rng.standard_normal((4, dims[-1]))
        y, cache = net.forward(x)
        grads, _ = net.backward(cache, wvec)
        params = net.params()
        for _ in range(n_coords):
            pi = rng.integers(len(params))
            flat = params[pi].reshape(-1)
            ci = rng.integers(flat.size)
            h = 1e-6
            orig = flat[ci]
            flat[ci] = orig + h
            up = float(np.sum(net.forward(x)[0] * wvec))
            flat[ci] = orig - h
            dn = float(np.sum(net.forward(x)[0] * wvec))
            flat[ci] = orig
            fd = (up - dn) / (2 * h)
            an = grads[pi].reshape(-1)[ci]
            worst = max(worst, abs(an - fd) / max(1e-8, abs(fd)))
    return worst < 1e-4, f"max relative gradient error {worst:.2e}"


def check_td3_min_target(n_batches=50):
    """Clipped double-Q target never exceeds either single-critic target."""
    rng = np.random.default_rng(9)
    cfg = AgentConfig(hidden_dims=(16, 8))
    agent = Td3Agent(6, np.zeros(2), np.full(2, 2.0), cfg, rng)
    ok = True
    for _ in range(n_batches):
        batch = {
            "s": rng.standard_normal((8, 6)),
            "a": rng.uniform(0, 2, (8, 2)),
            "r": rng.uniform(-20, 0, 8),
            "s2": rng.standard_normal((8, 6)),
            "d": np.zeros(8),
        }
        tc1, tc2 = agent.target_critic1.copy(), agent.target_critic2.copy()
        diag = agent.update_batch(batch)
        a2 = diag["target_action"]
        sa2 = np.hstack([batch["s2"], a2])
        y1 = batch["r"] + cfg.discount * tc1.forward(sa2)[0][:, 0]
        y2 = batch["r"] + cfg.discount * tc2.forward(sa2)[0][:, 0]
        ok = ok and bool(np.all(diag["td_target"] <= y1)) and bool(np.all(diag["td_target"] <= y2))
    return ok, "y <= min single-critic target on all synthetic batches"


def check_ou_stationary(steps=200_000):
    from .agents import OuNoise

    rng = np.random.default_rng(13)
    noise = OuNoise(1)
    xs = np.empty(steps)
    for i in range(steps):
        xs[i] = noise.sample(rng)[0]
    target = noise.sigma / np.sqrt(2 * noise.theta - noise.theta**2)
    got = float(np.std(xs[1000:]))
    return abs(got - target) / target < 0.03, f"stationary std {got:.4f} vs {target:.4f}"


def check_determinism():
    cfg = RunConfig(algo="ddpg", seed=3, episodes=2)
    cfg.env.t_max = 10
    cfg.agent.hidden_dims = (16, 8)
    a = train_run(cfg.env, cfg.agent, cfg.algo, cfg.seed, cfg.episodes).records
    b = train_run(cfg.env, cfg.agent, cfg.algo, cfg.seed, cfg.episodes).records
    return a == b, f"{len(a)} episode records reproduced exactly"


CHECKS = (
    ("cpu-frequency", check_cpu_frequency),
    ("doppler-correlation", check_doppler_correlation),
    ("zero-forcing", check_zero_forcing),
    ("queue-recursion", check_queue_recursion),
    ("gradients", check_gradients),
    ("td3-min-target", check_td3_min_target),
    ("ou-stationary", check_ou_stationary),
    ("determinism", check_determinism),
)


def run_validation(out=print) -> bool:
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok = all_ok and ok
        out(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
