# ABOUTME: Central finite-difference check of tape gradients
# ABOUTME: Reports the worst |analytic - numeric| / max(1, |analytic|, |numeric|) over all input coordinates

import logging
from typing import Callable, List, Sequence

import numpy as np

from rendnet.gradkit.tape import Tape, TensorNode

logger = logging.getLogger(__name__)

ScalarFn = Callable[[List[TensorNode]], TensorNode]


def _evaluate(fn: ScalarFn, inputs: Sequence[np.ndarray]) -> float:
    tape = Tape()
    leaves = [tape.leaf(x) for x in inputs]
    return float(fn(leaves).data)


def analytic_gradients(fn: ScalarFn, inputs: Sequence[np.ndarray]) -> List[np.ndarray]:
    tape = Tape()
    leaves = [tape.leaf(np.array(x, dtype=float), requires_grad=True) for x in inputs]
    loss = fn(leaves)
    grads = tape.backward(loss)
    return [grads.get(leaf.id, np.zeros_like(leaf.data)) for leaf in leaves]


def grad_check(fn: ScalarFn, inputs: Sequence[np.ndarray], eps: float = 1e-5) -> float:
    """Maximum relative error between backward and central differences.

    `fn` receives fresh leaves built from `inputs` (one per array, same order)
    and must return a scalar node on their tape.
    """
    inputs = [np.array(x, dtype=float) for x in inputs]
    analytic = analytic_gradients(fn, inputs)
    worst = 0.0
    for k, x in enumerate(inputs):
        for index in np.ndindex(x.shape):
            original = x[index]
            x[index] = original + eps
            f_plus = _evaluate(fn, inputs)
            x[index] = original - eps
            f_minus = _evaluate(fn, inputs)
            x[index] = original
            numeric = (f_plus - f_minus) / (2.0 * eps)
            a = float(analytic[k][index])
            error = abs(a - numeric) / max(1.0, abs(a), abs(numeric))
            worst = max(worst, error)
    logger.debug(f"grad_check: max relative error {worst:.3e}")
    return worst
