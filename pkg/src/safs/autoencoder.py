"""Single auto-encoders and the two-stage stack.

A stage encodes with sigmoid(W x + b) and decodes with sigmoid(W' z + b');
the stack realizes the 5-layer N-n-N-n-N template, trained greedily one
stage at a time. The middle-layer activations are the learned
representation of the continuous features.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


class TrainingDiverged(RuntimeError):
    def __init__(self, epoch: int):
        super().__init__(f"non-finite loss at epoch {epoch}; lower the learning rate")
        self.epoch = epoch


def sigmoid(x):
    """Numerically stable logistic function."""
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ex = np.exp(arr[~pos])
    out[~pos] = ex / (1.0 + ex)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class DenseLayer:
    weights: np.ndarray  # out_dim x in_dim
    bias: np.ndarray  # out_dim

    def __post_init__(self):
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("non-finite layer parameters")
        if self.weights.shape[0] != self.bias.shape[0]:
            raise ValueError("weight/bias dimension mismatch")

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class Autoencoder:
    encoder: DenseLayer
    decoder: DenseLayer

    def __post_init__(self):
        if self.decoder.out_dim != self.encoder.in_dim or self.decoder.in_dim != self.encoder.out_dim:
            raise ValueError("encoder/decoder dimensions inconsistent")

    @property
    def in_dim(self) -> int:
        return self.encoder.in_dim

    @property
    def hid_dim(self) -> int:
        return self.encoder.out_dim


@dataclass(frozen=True)
class Architecture:
    input_dim: int  # N: continuous feature count, also middle-layer width
    hidden_width: int  # n: width of the two flanking hidden layers

    def __post_init__(self):
        if self.input_dim < 1 or self.hidden_width < 1:
            raise ValueError("layer widths must be >= 1")

    def layer_sizes(self) -> list[int]:
        N, n = self.input_dim, self.hidden_width
        return [N, n, N, n, N]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 500
    batch_size: int = 32
    weight_init_scale: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.weight_init_scale <= 0:
            raise ValueError("weight_init_scale must be positive")


@dataclass(frozen=True)
class StackedAutoencoder:
    stages: tuple[Autoencoder, Autoencoder]
    architecture: Architecture
    training_log: tuple[np.ndarray, np.ndarray]  # loss per epoch, per stage

    def __post_init__(self):
        s1, s2 = self.stages
        if s2.in_dim != s1.hid_dim or s2.hid_dim != self.architecture.input_dim:
            raise ValueError("stage dimensions do not realize the architecture")


def encode(ae: Autoencoder, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != ae.in_dim:
        raise ValueError(f"expected input width {ae.in_dim}, got {x.shape[-1]}")
    return sigmoid(x @ ae.encoder.weights.T + ae.encoder.bias)

def decode(ae: Autoencoder, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.shape[-1] != ae.hid_dim:
        raise ValueError(f"expected code width {ae.hid_dim}, got {z.shape[-1]}")
    return sigmoid(z @ ae.decoder.weights.T + ae.decoder.bias)


def reconstruction_loss(x: np.ndarray, x_prime: np.ndarray) -> float:
    """Mean squared reconstruction error of one vector (or row batch)."""
    x = np.asarray(x, dtype=np.float64)
    x_prime = np.asarray(x_prime, dtype=np.float64)
    if x.shape != x_prime.shape:
        raise ValueError("shape mismatch")
    d = x - x_prime
    return float(np.mean(d * d))


def loss_gradient(ae: Autoencoder, batch: np.ndarray):
    """Analytic gradient of the mean per-row reconstruction error.

    Returns (dW, db, dWp, dbp) matching (encoder.weights, encoder.bias,
    decoder.weights, decoder.bias).
    """
    X = np.atleast_2d(np.asarray(batch, dtype=np.float64))
    k, d = X.shape
    Z = encode(ae, X)
    Xp = decode(ae, Z)
    # loss = (1/k) sum_rows (1/d) ||x - x'||^2
    delta_out = (2.0 / (k * d)) * (Xp - X) * Xp * (1.0 - Xp)
    dWp = delta_out.T @ Z
    dbp = delta_out.sum(axis=0)
    delta_hid = (delta_out @ ae.decoder.weights) * Z * (1.0 - Z)
    dW = delta_hid.T @ X
    db = delta_hid.sum(axis=0)
    return dW, db, dWp, dbp


def _init_autoencoder(in_dim: int, hid_dim: int, scale: float, rng: np.random.Generator) -> Autoencoder:
    W = rng.uniform(-scale, scale, size=(hid_dim, in_dim))
    b = rng.uniform(-scale, scale, size=hid_dim)
    Wp = rng.uniform(-scale, scale, size=(in_dim, hid_dim))
    bp = rng.uniform(-scale, scale, size=in_dim)
    return Autoencoder(DenseLayer(W, b), DenseLayer(Wp, bp))


def train_autoencoder(data: np.ndarray, hid_dim: int, cfg: TrainConfig) -> tuple[Autoencoder, np.ndarray]:
    """Train one auto-encoder stage by mini-batch gradient descent.

    Returns the trained model and its per-epoch loss log (full-data mean
    reconstruction error, recorded after each epoch).
    """
    X = np.atleast_2d(np.asarray(data, dtype=np.float64))
    m, d = X.shape
    if hid_dim < 1:
        raise ValueError("hid_dim must be >= 1")
    rng = np.random.default_rng(cfg.seed)
    ae = _init_autoencoder(d, hid_dim, cfg.weight_init_scale, rng)
    bs = min(cfg.batch_size, m)

    W = ae.encoder.weights.copy()
    b = ae.encoder.bias.copy()
    Wp = ae.decoder.weights.copy()
    bp = ae.decoder.bias.copy()
    log = np.empty(cfg.epochs, dtype=np.float64)
    lr = cfg.learning_rate

    for epoch in range(cfg.epochs):
        perm = rng.permutation(m)
        for start in range(0, m, bs):
            rows = perm[start : start + bs]
            cur = Autoencoder(DenseLayer(W, b), DenseLayer(Wp, bp))
            dW, db, dWp, dbp = loss_gradient(cur, X[rows])
            W = W - lr * dW
            b = b - lr * db
            Wp = Wp - lr * dWp
            bp = bp - lr * dbp
            if not (np.all(np.isfinite(W)) and np.all(np.isfinite(Wp))):
                raise TrainingDiverged(epoch)
        cur = Autoencoder(DenseLayer(W, b), DenseLayer(Wp, bp))
        loss = reconstruction_loss(X, decode(cur, encode(cur, X)))
        if not np.isfinite(loss):
            raise TrainingDiverged(epoch)
        log[epoch] = loss

    return Autoencoder(DenseLayer(W, b), DenseLayer(Wp, bp)), log


def train_stacked(data: np.ndarray, arch: Architecture, cfg: TrainConfig) -> StackedAutoencoder:
    """Greedy layer-wise training: stage 1 (N->n) on the data, stage 2
    (n->N) on stage-1 encodings. No joint fine-tuning."""
    X = np.atleast_2d(np.asarray(data, dtype=np.float64))
    if X.shape[1] != arch.input_dim:
        raise ValueError(f"data width {X.shape[1]} != architecture N {arch.input_dim}")
    stage1, log1 = train_autoencoder(X, arch.hidden_width, cfg)
    H = encode(stage1, X)
    cfg2 = replace(cfg, seed=cfg.seed + 1)
    stage2, log2 = train_autoencoder(H, arch.input_dim, cfg2)
    return StackedAutoencoder((stage1, stage2), arch, (log1, log2))


def represent(sae: StackedAutoencoder, data: np.ndarray) -> np.ndarray:
    """Middle-layer activations: stage-1 encoder then stage-2 encoder."""
    X = np.atleast_2d(np.asarray(data, dtype=np.float64))
    return encode(sae.stages[1], encode(sae.stages[0], X))


FORMAT_VERSION = 1


def save_stacked(sae: StackedAutoencoder, path) -> None:
    """Flat text persistence: version, dims, then row-major parameter
    blocks in full precision."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"safs-sae {FORMAT_VERSION}\n")
        fh.write(f"{sae.architecture.input_dim} {sae.architecture.hidden_width}\n")
        for stage in sae.stages:
            for layer in (stage.encoder, stage.decoder):
                for row in layer.weights:
                    fh.write(" ".join(repr(v) for v in row.tolist()) + "\n")
                fh.write(" ".join(repr(v) for v in layer.bias.tolist()) + "\n")
        for log in sae.training_log:
            fh.write(" ".join(repr(v) for v in log.tolist()) + "\n")


def load_stacked(path) -> StackedAutoencoder:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    header = lines[0].split()
    if header[:1] != ["safs-sae"] or int(header[1]) != FORMAT_VERSION:
        raise ValueError(f"unrecognized model file {path}")
    N, n = map(int, lines[1].split())
    pos = 2

    def read_block(rows: int) -> np.ndarray:
        nonlocal pos
        block = np.array([[float(v) for v in lines[pos + r].split()] for r in range(rows)])
        pos += rows
        return block

    stages = []
    for in_dim, hid in ((N, n), (n, N)):
        W = read_block(hid)
        b = read_block(1)[0]
        Wp = read_block(in_dim)
        bp = read_block(1)[0]
        stages.append(Autoencoder(DenseLayer(W, b), DenseLayer(Wp, bp)))
    logs = tuple(np.array([float(v) for v in lines[pos + i].split()] if lines[pos + i] else []) for i in range(2))
    return StackedAutoencoder((stages[0], stages[1]), Architecture(N, n), logs)
