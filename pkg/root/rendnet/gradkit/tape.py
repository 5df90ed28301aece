# ABOUTME: Append-only tape of tensor nodes and the reverse sweep that fills leaf gradients
# ABOUTME: Every recorded node keeps its inputs and a closure mapping the output gradient to input gradients

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from rendnet.exceptions import ShapeMismatchError

logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


@dataclass(eq=False)
class TensorNode:
    tape: "Tape"
    id: int
    data: np.ndarray
    requires_grad: bool
    op: Optional[str] = None
    inputs: Tuple["TensorNode", ...] = ()
    backward_fn: Optional[BackwardFn] = None
    name: Optional[str] = None
    grad: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def is_leaf(self) -> bool:
        return self.op is None

    def __repr__(self) -> str:
        label = self.name or self.op or "leaf"
        return f"TensorNode(id={self.id}, {label}, shape={self.shape})"


class Tape:
    """Nodes in creation order; inputs always precede the nodes computed from them."""

    def __init__(self):
        self.nodes: List[TensorNode] = []

    def __len__(self) -> int:
        return len(self.nodes)

    def leaf(self, data, requires_grad: bool = False, name: Optional[str] = None) -> TensorNode:
        node = TensorNode(self, len(self.nodes), np.asarray(data, dtype=np.float64), requires_grad, name=name)
        self.nodes.append(node)
        return node

    def constant(self, data) -> TensorNode:
        return self.leaf(data, requires_grad=False)

    def record(self, op: str, data: np.ndarray, inputs: Sequence[TensorNode], backward_fn: BackwardFn) -> TensorNode:
        for node in inputs:
            if node.tape is not self:
                raise ValueError(f"{op}: input {node!r} belongs to another tape")
        requires_grad = any(node.requires_grad for node in inputs)
        node = TensorNode(
            self, len(self.nodes), np.asarray(data, dtype=np.float64), requires_grad,
            op=op, inputs=tuple(inputs), backward_fn=backward_fn if requires_grad else None,
        )
        self.nodes.append(node)
        return node

    def backward(self, loss: TensorNode) -> Dict[int, np.ndarray]:
        """Reverse sweep from a scalar `loss`; returns and stores gradients of grad-requiring leaves."""
        if loss.tape is not self:
            raise ValueError("loss belongs to another tape")
        if loss.data.size != 1:
            raise ShapeMismatchError(f"backward needs a scalar loss, got shape {loss.shape}")

        pending: Dict[int, np.ndarray] = {loss.id: np.ones_like(loss.data)}
        leaf_grads: Dict[int, np.ndarray] = {}
        for node in reversed(self.nodes[:loss.id + 1]):
            grad = pending.pop(node.id, None)
            if grad is None or not node.requires_grad:
                continue
            if node.is_leaf:
                leaf_grads[node.id] = grad
                node.grad = grad
                continue
            for parent, parent_grad in zip(node.inputs, node.backward_fn(grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                if parent_grad.shape != parent.shape:
                    raise ShapeMismatchError(
                        f"{node.op}: gradient shape {parent_grad.shape} does not match input shape {parent.shape}"
                    )
                if parent.id in pending:
                    pending[parent.id] = pending[parent.id] + parent_grad
                else:
                    pending[parent.id] = parent_grad
        return leaf_grads


def backward(tape: Tape, loss: TensorNode) -> Dict[int, np.ndarray]:
    return tape.backward(loss)
