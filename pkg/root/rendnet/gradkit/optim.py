# ABOUTME: Named parameter store with per-parameter Adam state, plus the bias-corrected Adam step
# ABOUTME: Batch-norm running statistics live beside the parameters as non-trainable buffers

import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Tuple

import numpy as np

from rendnet.exceptions import ShapeMismatchError
from rendnet.gradkit.ops import BatchNormState
from rendnet.gradkit.tape import Tape, TensorNode

logger = logging.getLogger(__name__)


@dataclass
class AdamState:
    step: int
    m: np.ndarray
    v: np.ndarray


class ParamStore:
    """Parameters by unique name, in insertion order."""

    def __init__(self):
        self._params: "OrderedDict[str, np.ndarray]" = OrderedDict()
        self._adam: Dict[str, AdamState] = {}
        self.bn_states: "OrderedDict[str, BatchNormState]" = OrderedDict()

    def add(self, name: str, value: np.ndarray) -> np.ndarray:
        if name in self._params:
            raise ValueError(f"parameter '{name}' already exists")
        value = np.array(value, dtype=np.float64)
        self._params[name] = value
        self._adam[name] = AdamState(0, np.zeros_like(value), np.zeros_like(value))
        return value

    def add_batch_norm(self, name: str, channels: int) -> BatchNormState:
        if name in self.bn_states:
            raise ValueError(f"batch-norm buffer '{name}' already exists")
        state = BatchNormState.fresh(channels)
        self.bn_states[name] = state
        return state

    def __getitem__(self, name: str) -> np.ndarray:
        return self._params[name]

    def __setitem__(self, name: str, value: np.ndarray) -> None:
        if name not in self._params:
            raise KeyError(name)
        value = np.asarray(value, dtype=np.float64)
        if value.shape != self._params[name].shape:
            raise ShapeMismatchError(
                f"parameter '{name}' has shape {self._params[name].shape}, got {value.shape}"
            )
        self._params[name] = value.copy()

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> Iterator[str]:
        return iter(self._params)

    def items(self) -> Iterator[Tuple[str, np.ndarray]]:
        return iter(self._params.items())

    def adam_state(self, name: str) -> AdamState:
        return self._adam[name]

    def num_values(self) -> int:
        return int(sum(p.size for p in self._params.values()))

    def bind(self, tape: Tape, requires_grad: bool = True) -> Dict[str, TensorNode]:
        """Leaves on `tape` for every parameter, keyed by name."""
        return {
            name: tape.leaf(value, requires_grad=requires_grad, name=name)
            for name, value in self._params.items()
        }


def gradients_by_name(leaves: Mapping[str, TensorNode], grads: Mapping[int, np.ndarray]) -> Dict[str, np.ndarray]:
    """Translate tape leaf gradients back to parameter names."""
    return {name: grads[node.id] for name, node in leaves.items() if node.id in grads}


def adam_step(
    store: ParamStore,
    grads: Mapping[str, np.ndarray],
    lr: float = 1e-3,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    """Bias-corrected Adam update in place; parameters without a gradient are left alone."""
    for name, grad in grads.items():
        if name not in store:
            raise KeyError(f"gradient for unknown parameter '{name}'")
        param = store[name]
        grad = np.asarray(grad, dtype=np.float64)
        if grad.shape != param.shape:
            raise ShapeMismatchError(f"gradient for '{name}' has shape {grad.shape}, parameter has {param.shape}")
        state = store.adam_state(name)
        state.step += 1
        state.m = beta1 * state.m + (1.0 - beta1) * grad
        state.v = beta2 * state.v + (1.0 - beta2) * grad * grad
        m_hat = state.m / (1.0 - beta1 ** state.step)
        v_hat = state.v / (1.0 - beta2 ** state.step)
        param -= lr * m_hat / (np.sqrt(v_hat) + eps)
