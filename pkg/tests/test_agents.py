"""Exploration noise, replay buffer, and the two agents' update rules."""

import numpy as np
import pytest

from mecrl.agents import AgentConfig, DdpgAgent, OuNoise, ReplayBuffer, Td3Agent, make_agent

LOW = np.zeros(2)
HIGH = np.full(2, 2.0)


def tiny_agent(cls, state_dim=3, seed=0, **cfg_kw):
    cfg = AgentConfig(hidden_dims=(8, 6), **cfg_kw)
    return cls(state_dim, LOW, HIGH, cfg, np.random.default_rng(seed))


def synthetic_batch(rng, n=16, state_dim=3, r_low=-20.0):
    return {
        "s": rng.standard_normal((n, state_dim)),
        "a": rng.uniform(0, 2, (n, 2)),
        "r": rng.uniform(r_low, 0.0, n),
        "s2": rng.standard_normal((n, state_dim)),
        "d": np.zeros(n),
    }


class TestOuNoise:
    def test_deterministic_decay(self):
        n = OuNoise(1, theta=0.15, sigma=0.0)
        n.x = np.array([1.0])
        assert n.sample(np.random.default_rng(0))[0] == pytest.approx(0.85)

    def test_geometric_decay_to_zero(self):
        n = OuNoise(1, theta=0.15, sigma=0.0)
        n.x = np.array([-4.0])
        rng = np.random.default_rng(0)
        for k in range(1, 20):
            assert n.sample(rng)[0] == pytest.approx(-4.0 * 0.85**k)

    def test_reset(self):
        n = OuNoise(2)
        n.sample(np.random.default_rng(0))
        n.reset()
        assert np.all(n.x == 0.0)

    def test_stationary_std(self):
        # discrete OU: x' = (1 - theta) x + sigma xi has std sigma / sqrt(2 theta - theta^2)
        n = OuNoise(1, theta=0.15, sigma=0.12)
        rng = np.random.default_rng(1)
        m = 1_000_000
        xs = np.empty(m)
        for i in range(m):
            xs[i] = n.sample(rng)[0]
        target = 0.12 / np.sqrt(2 * 0.15 - 0.15**2)
        assert abs(np.std(xs[1000:]) - target) / target < 0.02


class TestReplayBuffer:
    def test_fifo_eviction(self):
        buf = ReplayBuffer(3, 2, 1)
        for i in range(4):
            buf.push([i, i], [i], float(i), [i, i], 0.0)
        assert buf.size == 3
        assert sorted(buf.r.tolist()) == [1.0, 2.0, 3.0]  # item 0 evicted

    def test_size_monotone_capped(self):
        buf = ReplayBuffer(5, 1, 1)
        sizes = []
        for i in range(12):
            buf.push([0.0], [0.0], 0.0, [0.0], 0.0)
            sizes.append(buf.size)
        assert sizes == sorted(sizes)
        assert sizes[-1] == 5

    def test_single_item_roundtrip(self):
        buf = ReplayBuffer(4, 2, 2)
        buf.push([1.0, 2.0], [0.5, 0.25], -3.0, [4.0, 5.0], 0.0)
        batch = buf.sample(1, np.random.default_rng(0))
        assert np.array_equal(batch["s"][0], [1.0, 2.0])
        assert batch["r"][0] == -3.0

    def test_underfilled_sampling_rejected(self):
        buf = ReplayBuffer(10, 1, 1)
        buf.push([0.0], [0.0], 0.0, [0.0], 0.0)
        with pytest.raises(ValueError):
            buf.sample(2, np.random.default_rng(0))

    def test_uniform_sampling(self):
        buf = ReplayBuffer(8, 1, 1)
        for i in range(8):
            buf.push([0.0], [0.0], float(i), [0.0], 0.0)
        rng = np.random.default_rng(3)
        counts = np.zeros(8)
        n_draws = 100_000
        for _ in range(n_draws // 8):
            batch = buf.sample(8, rng)
            for r in batch["r"]:
                counts[int(r)] += 1
        expected = n_draws / 8
        sigma = np.sqrt(n_draws * (1 / 8) * (7 / 8))
        assert np.all(np.abs(counts - expected) < 3 * sigma)


class TestAct:
    def test_greedy_is_repeatable(self):
        ag = tiny_agent(DdpgAgent)
        s = np.ones(3)
        assert np.array_equal(ag.act(s, explore=False), ag.act(s, explore=False))

    def test_saturated_tanh_hits_bounds(self):
        ag = tiny_agent(DdpgAgent)
        ag.actor.biases[-1][:] = 50.0  # tanh saturates at +1
        a = ag.act(np.zeros(3), explore=False)
        assert np.array_equal(a, HIGH)
        ag.actor.biases[-1][:] = -50.0
        assert np.array_equal(ag.act(np.zeros(3), explore=False), LOW)

    def test_huge_noise_clipped(self):
        ag = tiny_agent(DdpgAgent)
        ag.noise.x = np.array([1e6, 1e6])
        a = ag.act(np.zeros(3), explore=True)
        assert np.array_equal(a, HIGH)

    def test_explore_adds_noise(self):
        ag = tiny_agent(DdpgAgent)
        greedy = ag.act(np.zeros(3), explore=False)
        explored = ag.act(np.zeros(3), explore=True)
        assert not np.array_equal(greedy, explored)


class TestDdpgUpdate:
    def test_terminal_targets_equal_rewards(self):
        ag = tiny_agent(DdpgAgent, seed=1)
        batch = synthetic_batch(np.random.default_rng(2))
        batch["d"] = np.ones(16)
        diag = ag.update_batch(batch)
        np.testing.assert_allclose(diag["td_target"], batch["r"], rtol=0, atol=0)

    def test_zero_discount_targets_equal_rewards(self):
        ag = tiny_agent(DdpgAgent, seed=3, discount=0.0)
        batch = synthetic_batch(np.random.default_rng(4))
        diag = ag.update_batch(batch)
        np.testing.assert_allclose(diag["td_target"], batch["r"], rtol=0, atol=0)

    def test_hand_computed_targets(self):
        """Two samples through affine nets, target y = r + gamma Q'(s', mu'(s'))."""
        cfg = AgentConfig(hidden_dims=(), discount=0.9)
        ag = DdpgAgent(3, LOW, HIGH, cfg, np.random.default_rng(5))
        Wa = np.array([[0.1, -0.2], [0.0, 0.3], [0.2, 0.1]])
        ba = np.array([0.05, -0.1])
        Wc = np.array([[0.5], [-0.25], [0.1], [0.2], [-0.3]])
        bc = np.array([0.7])
        ag.target_actor.weights[0][:] = Wa
        ag.target_actor.biases[0][:] = ba
        ag.target_critic.weights[0][:] = Wc
        ag.target_critic.biases[0][:] = bc

        s2 = np.array([[1.0, -1.0, 0.5], [0.2, 0.0, -0.7]])
        r = np.array([-2.0, -5.0])
        batch = {
            "s": np.zeros((2, 3)),
            "a": np.ones((2, 2)),
            "r": r,
            "s2": s2,
            "d": np.zeros(2),
        }
        u = np.tanh(s2 @ Wa + ba)
        a2 = (u + 1.0) * 1.0  # low 0, half range 1
        q = np.hstack([s2, a2]) @ Wc + bc
        expected = r + 0.9 * q[:, 0]
        diag = ag.update_batch(batch)
        np.testing.assert_allclose(diag["td_target"], expected, rtol=1e-12)

    def test_update_moves_toward_targets(self):
        ag = tiny_agent(DdpgAgent, seed=6)
        rng = np.random.default_rng(7)
        batch = synthetic_batch(rng)
        sa = np.hstack([batch["s"], batch["a"]])
        diag = ag.update_batch(batch)
        y = diag["td_target"]
        before = float(np.mean((ag.critic.forward(sa)[0][:, 0] - y) ** 2))
        for _ in range(200):
            ag.update_batch(batch)
        # targets drift as the target nets track, so recompute the final loss
        diag = ag.update_batch(batch)
        after = float(np.mean((ag.critic.forward(sa)[0][:, 0] - diag["td_target"]) ** 2))
        assert after < before

    def test_targets_track_main(self):
        ag = tiny_agent(DdpgAgent, seed=8)
        batch = synthetic_batch(np.random.default_rng(9))
        t0 = [p.copy() for p in ag.target_critic.params()]
        ag.update_batch(batch)
        moved = any(not np.array_equal(a, b) for a, b in zip(t0, ag.target_critic.params()))
        assert moved


class TestTd3Update:
    def test_min_target_property(self):
        ag = tiny_agent(Td3Agent, seed=10)
        rng = np.random.default_rng(11)
        for _ in range(100):
            batch = synthetic_batch(rng)
            # snapshot targets: the update soft-updates them afterwards
            tc1, tc2 = ag.target_critic1.copy(), ag.target_critic2.copy()
            diag = ag.update_batch(batch)
            sa2 = np.hstack([batch["s2"], diag["target_action"]])
            y1 = batch["r"] + ag.cfg.discount * tc1.forward(sa2)[0][:, 0]
            y2 = batch["r"] + ag.cfg.discount * tc2.forward(sa2)[0][:, 0]
            assert np.all(diag["td_target"] <= y1)
            assert np.all(diag["td_target"] <= y2)
            np.testing.assert_array_equal(diag["td_target"], np.minimum(y1, y2))

    def test_duplicated_critics_reduce_to_single_target(self):
        ag = tiny_agent(Td3Agent, seed=12)
        for mine, twin in (
            (ag.critic2, ag.critic1),
            (ag.target_critic2, ag.target_critic1),
        ):
            mine.weights = [w.copy() for w in twin.weights]
            mine.biases = [b.copy() for b in twin.biases]
        batch = synthetic_batch(np.random.default_rng(13))
        diag = ag.update_batch(batch)
        sa2 = np.hstack([batch["s2"], diag["target_action"]])
        y_single = batch["r"] + ag.cfg.discount * ag.target_critic1.forward(sa2)[0][:, 0]
        np.testing.assert_allclose(diag["td_target"], y_single, rtol=1e-12)

    def test_twin_critics_independently_initialized(self):
        ag = tiny_agent(Td3Agent, seed=14)
        assert not np.array_equal(ag.critic1.weights[0], ag.critic2.weights[0])

    def test_policy_delay_schedule(self):
        ag = tiny_agent(Td3Agent, seed=15, update_every=2)
        rng = np.random.default_rng(16)
        actor_changes = []
        for _ in range(10):
            before_actor = [p.copy() for p in ag.actor.params()]
            before_target = [p.copy() for p in ag.target_critic1.params()]
            ag.update_batch(synthetic_batch(rng))
            actor_moved = any(
                not np.array_equal(a, b) for a, b in zip(before_actor, ag.actor.params())
            )
            target_moved = any(
                not np.array_equal(a, b) for a, b in zip(before_target, ag.target_critic1.params())
            )
            assert actor_moved == target_moved  # targets move only with the actor
            actor_changes.append(actor_moved)
        assert ag.actor_update_count == 5
        assert actor_changes == [False, True] * 5

    def test_smoothing_noise_is_clipped(self):
        ag = tiny_agent(Td3Agent, seed=17)
        s2 = np.random.default_rng(18).standard_normal((256, 3))
        u, _ = ag.target_actor.forward(s2)
        base = ag._map_action(u)
        a2 = ag.smoothed_target_action(s2)
        action_range = HIGH - LOW
        assert np.all(np.abs(a2 - np.clip(base, LOW, HIGH)) <= 0.25 * action_range + 1e-12)
        assert np.all(a2 >= LOW) and np.all(a2 <= HIGH)

    def test_terminal_targets_equal_rewards(self):
        ag = tiny_agent(Td3Agent, seed=19)
        batch = synthetic_batch(np.random.default_rng(20))
        batch["d"] = np.ones(16)
        diag = ag.update_batch(batch)
        np.testing.assert_allclose(diag["td_target"], batch["r"], rtol=0, atol=0)


class TestMakeAgent:
    def test_dispatch(self):
        cfg = AgentConfig(hidden_dims=(4,))
        assert isinstance(make_agent("ddpg", 3, LOW, HIGH, cfg, np.random.default_rng(0)), DdpgAgent)
        assert isinstance(make_agent("td3", 3, LOW, HIGH, cfg, np.random.default_rng(0)), Td3Agent)
        with pytest.raises(ValueError):
            make_agent("ppo", 3, LOW, HIGH, cfg, np.random.default_rng(0))

    def test_targets_start_equal_to_mains(self):
        ag = tiny_agent(Td3Agent, seed=21)
        for main, target in (
            (ag.actor, ag.target_actor),
            (ag.critic1, ag.target_critic1),
            (ag.critic2, ag.target_critic2),
        ):
            for pm, pt in zip(main.params(), target.params()):
                assert np.array_equal(pm, pt)
