"""Ornstein-Uhlenbeck exploration noise: paths, decay, and stationary spread."""

import numpy as np

from mecrl.agents import OuNoise

rng = np.random.default_rng(5)

print("== three sample paths (theta=0.15, sigma=0.12) ==")
for trial in range(3):
    noise = OuNoise(1)
    path = [noise.sample(rng)[0] for _ in range(12)]
    print(f"path {trial}: " + " ".join(f"{x:+.3f}" for x in path))

print("\n== mean reversion with sigma = 0 ==")
noise = OuNoise(1, sigma=0.0)
noise.x = np.array([1.0])
decay = [noise.sample(rng)[0] for _ in range(6)]
print("from 1.0:", " ".join(f"{x:.4f}" for x in decay), " (geometric with ratio 0.85)")

print("\n== stationary spread over 500k steps ==")
noise = OuNoise(1)
xs = np.empty(500_000)
for i in range(xs.size):
    xs[i] = noise.sample(rng)[0]
theory = noise.sigma / np.sqrt(2 * noise.theta - noise.theta**2)
print(f"measured std {np.std(xs[1000:]):.4f}   closed form sigma/sqrt(2 theta - theta^2) = {theory:.4f}")
print("scaled by the 1 W action half-range, exploration wiggles powers by ~0.23 W")
