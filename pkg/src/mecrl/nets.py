"""Dense feed-forward networks with exact analytic gradients.

Minimal substrate for the actors and critics: ReLU hidden layers, identity or
tanh output, reverse-mode gradients checked against finite differences, and an
adaptive-moment optimizer.  Batch-first layout, float64 throughout (32-bit is
not enough headroom for the gradient checks).
"""

import numpy as np

ACTIVATIONS = ("identity", "tanh")


class Mlp:
    """Weights W_i of shape (fan_in, fan_out); forward is x @ W + b per layer.

    With ``rng`` the layers are initialized uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))
    except the final layer at uniform(-3e-3, +3e-3); without, all parameters
    start at zero (handy in tests).
    """

    def __init__(self, dims, output_activation="identity", rng=None):
        if len(dims) < 2:
            raise ValueError("need at least input and output dims")
        if output_activation not in ACTIVATIONS:
            raise ValueError(f"unknown output activation {output_activation!r}")
        self.dims = list(int(d) for d in dims)
        self.output_activation = output_activation
        self.weights = []
        self.biases = []
        last = len(self.dims) - 2
        for i, (fan_in, fan_out) in enumerate(zip(self.dims[:-1], self.dims[1:])):
            if rng is None:
                W = np.zeros((fan_in, fan_out))
                b = np.zeros(fan_out)
            else:
                bound = 3e-3 if i == last else 1.0 / np.sqrt(fan_in)
                W = rng.uniform(-bound, bound, size=(fan_in, fan_out))
                b = rng.uniform(-bound, bound, size=fan_out)
            self.weights.append(W)
            self.biases.append(b)

    @property
    def n_layers(self):
        return len(self.weights)

    def params(self):
        """Flat list [W0, b0, W1, b1, ...]; arrays are the live storage."""
        out = []
        for W, b in zip(self.weights, self.biases):
            out.append(W)
            out.append(b)
        return out

    def copy(self):
        other = Mlp(self.dims, self.output_activation)
        for i in range(self.n_layers):
            other.weights[i] = self.weights[i].copy()
            other.biases[i] = self.biases[i].copy()
        return other

    def forward(self, x):
        """Returns (y, cache).  Accepts a single vector or a (batch, dim) array."""
        x = np.asarray(x, dtype=np.float64)
        one_d = x.ndim == 1
        a = x[None, :] if one_d else x
        if a.shape[1] != self.dims[0]:
            raise ValueError(f"input dim {a.shape[1]} != {self.dims[0]}")
        xs, zs = [], []
        last = self.n_layers - 1
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            xs.append(a)
            z = a @ W + b
            zs.append(z)
            if i < last:
                a = np.maximum(z, 0.0)
            elif self.output_activation == "tanh":
                a = np.tanh(z)
            else:
                a = z
        cache = (xs, zs, a)
        return (a[0] if one_d else a), cache

    def backward(self, cache, grad_y, with_param_grads=True):
        """Exact gradients of a scalar objective with d(obj)/dy = grad_y.

        Returns (param_grads, grad_x) with param_grads aligned to params()
        (or None when with_param_grads is False, which skips the weight
        gradient matmuls on the pure input-gradient path).
        """
        xs, zs, y = cache
        if len(xs) != self.n_layers or xs[0].shape[1] != self.dims[0]:
            raise ValueError("cache does not match this network")
        g = np.asarray(grad_y, dtype=np.float64)
        one_d = g.ndim == 1
        g = g[None, :] if one_d else g
        if g.shape != y.shape:
            raise ValueError(f"grad_y shape {g.shape} != output shape {y.shape}")

        if self.output_activation == "tanh":
            dz = g * (1.0 - y * y)
        else:
            dz = g
        grads = [None] * (2 * self.n_layers) if with_param_grads else None
        for i in range(self.n_layers - 1, -1, -1):
            if with_param_grads:
                grads[2 * i] = xs[i].T @ dz
                grads[2 * i + 1] = dz.sum(axis=0)
            dx = dz @ self.weights[i].T
            if i > 0:
                dz = dx * (zs[i - 1] > 0.0)
        return grads, (dx[0] if one_d else dx)


class Adam:
    """Adaptive-moment gradient step with bias correction, in-place on params."""

    def __init__(self, params, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, params, grads):
        if len(params) != len(self.m):
            raise ValueError("parameter list does not match optimizer state")
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1**self.t
        c2 = 1.0 - b2**self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * np.square(g)
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def soft_update(target: Mlp, main: Mlp, tau: float) -> Mlp:
    """In-place convex combination: theta' <- tau theta + (1 - tau) theta'."""
    if target.dims != main.dims:
        raise ValueError(f"shape mismatch: {target.dims} vs {main.dims}")
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    for pt, pm in zip(target.params(), main.params()):
        pt *= 1.0 - tau
        pt += tau * pm
    return target
