# ABOUTME: Differentiable primitives recorded on a Tape: linear maps, relu, concat, gathers,
# ABOUTME: segment reductions, sparse interpolation, batch normalization and softmax cross-entropy

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from rendnet.exceptions import DomainError, ShapeMismatchError
from rendnet.gradkit.tape import TensorNode

BN_EPS = 1e-5
BN_MOMENTUM = 0.1


def _check_2d(x: TensorNode, op: str) -> None:
    if x.data.ndim != 2:
        raise ShapeMismatchError(f"{op}: expected a 2D input, got shape {x.shape}")


def linear(x: TensorNode, W: TensorNode, b: Optional[TensorNode] = None) -> TensorNode:
    """x @ W + b for x (n, i), W (i, o), b (o,).

    Each output row depends only on its input row, bit for bit, whatever the row count.
    """
    _check_2d(x, "linear")
    if W.data.ndim != 2 or W.shape[0] != x.shape[1]:
        raise ShapeMismatchError(f"linear: cannot multiply {x.shape} by {W.shape}")
    out = np.einsum("ni,io->no", x.data, W.data)
    inputs = [x, W]
    if b is not None:
        if b.shape != (W.shape[1],):
            raise ShapeMismatchError(f"linear: bias shape {b.shape} does not match output width {W.shape[1]}")
        out = out + b.data
        inputs.append(b)

    def backward(g):
        grads = [g @ W.data.T, x.data.T @ g]
        if b is not None:
            grads.append(g.sum(axis=0))
        return grads

    return x.tape.record("linear", out, inputs, backward)


def add(a: TensorNode, b: TensorNode) -> TensorNode:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"add: shapes {a.shape} and {b.shape} differ")
    return a.tape.record("add", a.data + b.data, [a, b], lambda g: (g, g))


def add_n(terms: Sequence[TensorNode]) -> TensorNode:
    """Left-to-right sum of same-shaped nodes."""
    if not terms:
        raise ValueError("add_n needs at least one term")
    total = terms[0]
    for term in terms[1:]:
        total = add(total, term)
    return total


def scale(x: TensorNode, factor: float) -> TensorNode:
    return x.tape.record("scale", x.data * factor, [x], lambda g: (g * factor,))


def relu(x: TensorNode) -> TensorNode:
    """max(x, 0); the gradient at exactly 0 is 0."""
    mask = x.data > 0
    return x.tape.record("relu", np.where(mask, x.data, 0.0), [x], lambda g: (g * mask,))


def concat(xs: Sequence[TensorNode]) -> TensorNode:
    """Concatenate along the last axis."""
    if not xs:
        raise ValueError("concat needs at least one input")
    widths = [x.shape[-1] for x in xs]
    bounds = np.cumsum([0] + widths)
    out = np.concatenate([x.data for x in xs], axis=-1)

    def backward(g):
        return [g[..., bounds[k]:bounds[k + 1]] for k in range(len(xs))]

    return xs[0].tape.record("concat", out, xs, backward)


def scatter_add_rows(index: np.ndarray, values: np.ndarray, rows: int) -> np.ndarray:
    """out[index[k]] += values[k] in row order of `values`, like np.add.at but through one bincount."""
    index = np.asarray(index, dtype=int)
    cols = int(np.prod(values.shape[1:]))
    flat = values.reshape(len(index), cols)
    cells = (index[:, None] * cols + np.arange(cols)).ravel()
    out = np.bincount(cells, weights=flat.ravel(), minlength=rows * cols)
    return out.reshape((rows,) + values.shape[1:])


def _group_starts(segments: np.ndarray, num_segments: int):
    """Stable order grouping rows by segment, and where each segment starts in that order."""
    order = np.argsort(segments, kind="stable")
    starts = np.searchsorted(segments[order], np.arange(num_segments))
    return order, starts


def gather(x: TensorNode, index) -> TensorNode:
    """Rows x[index]; repeated indices accumulate on the way back."""
    index = np.asarray(index, dtype=int)
    rows = x.shape[0]

    def backward(g):
        return (scatter_add_rows(index, g, rows),)

    return x.tape.record("gather", x.data[index], [x], backward)


def edge_matvec(theta: TensorNode, h: TensorNode) -> TensorNode:
    """Per-row vector-matrix product: out[e] = h[e] @ theta[e].reshape(i, o)."""
    _check_2d(h, "edge_matvec")
    rows, width_in = h.shape
    if theta.shape[0] != rows or theta.shape[1] % width_in:
        raise ShapeMismatchError(f"edge_matvec: theta {theta.shape} does not fit h {h.shape}")
    width_out = theta.shape[1] // width_in
    mats = theta.data.reshape(rows, width_in, width_out)
    out = np.einsum("ei,eio->eo", h.data, mats)

    def backward(g):
        d_theta = np.einsum("ei,eo->eio", h.data, g).reshape(theta.shape)
        d_h = np.einsum("eo,eio->ei", g, mats)
        return d_theta, d_h

    return h.tape.record("edge_matvec", out, [theta, h], backward)


def _segment_ids(segments, rows: int, num_segments: int) -> np.ndarray:
    segments = np.asarray(segments, dtype=int)
    if segments.shape != (rows,):
        raise ShapeMismatchError(f"expected {rows} segment ids, got shape {segments.shape}")
    if rows and (segments.min() < 0 or segments.max() >= num_segments):
        raise DomainError(f"segment ids must lie in [0, {num_segments})")
    return segments


def segment_max(x: TensorNode, segments, num_segments: int) -> TensorNode:
    """Columnwise max per group; the gradient goes to the lowest-index argmax row."""
    _check_2d(x, "segment_max")
    rows, cols = x.shape
    segments = _segment_ids(segments, rows, num_segments)
    counts = np.bincount(segments, minlength=num_segments)
    if np.any(counts == 0):
        raise DomainError(f"segment_max over an empty group (group {int(np.argmin(counts))})")
    if rows == 0:
        return x.tape.record("segment_max", np.zeros((0, cols)), [x], lambda g: (np.zeros((0, cols)),))

    order, starts = _group_starts(segments, num_segments)
    out = np.maximum.reduceat(x.data[order], starts, axis=0)
    row_ids = np.broadcast_to(np.arange(rows)[:, None], (rows, cols))
    hits = np.where(x.data == out[segments], row_ids, rows)
    argmax = np.minimum.reduceat(hits[order], starts, axis=0)
    col_ids = np.broadcast_to(np.arange(cols), (num_segments, cols))

    def backward(g):
        # each (argmax, column) cell is hit once: segments own disjoint rows
        dx = np.zeros((rows, cols))
        dx[argmax, col_ids] = g
        return (dx,)

    return x.tape.record("segment_max", out, [x], backward)


def _ordered_segment_sum(values: np.ndarray, segments: np.ndarray, num_segments: int) -> np.ndarray:
    """Per-group column sums taken in sorted value order, so row order within a group never matters."""
    rows, cols = values.shape
    out = np.zeros((num_segments, cols))
    if rows == 0:
        return out
    by_value = np.argsort(values, axis=0, kind="stable")
    by_segment = np.argsort(segments[by_value], axis=0, kind="stable")
    order = np.take_along_axis(by_value, by_segment, axis=0)
    seg_sorted = np.sort(segments, kind="stable")
    starts = np.flatnonzero(np.r_[True, seg_sorted[1:] != seg_sorted[:-1]])
    out[seg_sorted[starts]] = np.add.reduceat(np.take_along_axis(values, order, axis=0), starts, axis=0)
    return out


def segment_sum(x: TensorNode, segments, num_segments: int) -> TensorNode:
    _check_2d(x, "segment_sum")
    segments = _segment_ids(segments, x.shape[0], num_segments)
    out = _ordered_segment_sum(x.data, segments, num_segments)
    return x.tape.record("segment_sum", out, [x], lambda g: (g[segments],))


def segment_mean(x: TensorNode, segments, num_segments: int) -> TensorNode:
    """Per-group mean; empty groups yield zero rows."""
    _check_2d(x, "segment_mean")
    segments = _segment_ids(segments, x.shape[0], num_segments)
    counts = np.maximum(np.bincount(segments, minlength=num_segments), 1).astype(float)
    out = _ordered_segment_sum(x.data, segments, num_segments) / counts[:, None]
    return x.tape.record("segment_mean", out, [x], lambda g: ((g / counts[:, None])[segments],))


def sparse_apply(interpolation, H: TensorNode) -> TensorNode:
    """Apply a fixed interpolation map (anything with forward/backward) to node rows."""
    return H.tape.record(
        "sparse_apply", interpolation.forward(H.data), [H], lambda g: (interpolation.backward(g),)
    )


@dataclass
class BatchNormState:
    running_mean: np.ndarray
    running_var: np.ndarray

    @classmethod
    def fresh(cls, channels: int) -> "BatchNormState":
        return cls(np.zeros(channels), np.ones(channels))


def batch_norm(
    x: TensorNode,
    gamma: TensorNode,
    beta: TensorNode,
    state: BatchNormState,
    train: bool,
    eps: float = BN_EPS,
    momentum: float = BN_MOMENTUM,
) -> TensorNode:
    """Per-channel normalization over all rows.

    Train mode normalizes with the batch mean and biased variance and moves the
    running statistics (unbiased variance) by `momentum`; eval mode uses the
    running statistics.
    """
    _check_2d(x, "batch_norm")
    n = x.shape[0]
    if train:
        if n < 2:
            raise DomainError(f"batch_norm in train mode needs at least 2 rows, got {n}")
        mean = x.data.mean(axis=0)
        var = x.data.var(axis=0)
        state.running_mean = (1.0 - momentum) * state.running_mean + momentum * mean
        state.running_var = (1.0 - momentum) * state.running_var + momentum * var * n / (n - 1)
    else:
        mean, var = state.running_mean, state.running_var
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = (x.data - mean) * inv_std
    out = gamma.data * xhat + beta.data

    def backward(g):
        d_gamma = (g * xhat).sum(axis=0)
        d_beta = g.sum(axis=0)
        dxhat = g * gamma.data
        if train:
            dx = inv_std / n * (n * dxhat - dxhat.sum(axis=0) - xhat * (dxhat * xhat).sum(axis=0))
        else:
            dx = dxhat * inv_std
        return dx, d_gamma, d_beta

    return x.tape.record("batch_norm", out, [x, gamma, beta], backward)


def softmax_cross_entropy(logits: TensorNode, targets) -> TensorNode:
    """Mean over rows of -log softmax(logits)[target]."""
    _check_2d(logits, "softmax_cross_entropy")
    n, classes = logits.shape
    targets = np.asarray(targets, dtype=int)
    if targets.shape != (n,):
        raise ShapeMismatchError(f"expected {n} targets, got shape {targets.shape}")
    if n and (targets.min() < 0 or targets.max() >= classes):
        raise DomainError(f"targets must lie in [0, {classes})")
    shifted = logits.data - logits.data.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_norm
    loss = -log_probs[np.arange(n), targets].mean()

    def backward(g):
        grad = np.exp(log_probs)
        grad[np.arange(n), targets] -= 1.0
        return (grad * (g / n),)

    return logits.tape.record("softmax_cross_entropy", np.asarray(loss), [logits], backward)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def sum_all(x: TensorNode) -> TensorNode:
    return x.tape.record("sum_all", np.asarray(x.data.sum()), [x], lambda g: (np.full(x.shape, float(g)),))


def weighted_sum(x: TensorNode, weights: np.ndarray) -> TensorNode:
    """Scalar sum(x * weights) for a constant weight array."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != x.shape:
        raise ShapeMismatchError(f"weighted_sum: weights {weights.shape} do not match {x.shape}")
    return x.tape.record(
        "weighted_sum", np.asarray(float(np.sum(x.data * weights))), [x], lambda g: (weights * float(g),)
    )
