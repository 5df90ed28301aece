# ABOUTME: Tests for the gradient tape: leaf accumulation, constants, scalar checks and tape ownership
# ABOUTME: Also confirms the finite-difference checker flags a wrong backward rule

import numpy as np
import pytest

from rendnet.exceptions import ShapeMismatchError
from rendnet.gradkit import Tape, add, backward, grad_check, linear, scale, sum_all, weighted_sum


@pytest.mark.unit
class TestTape:
    def test_nodes_in_creation_order(self):
        tape = Tape()
        x = tape.leaf(np.ones((2, 2)), requires_grad=True)
        y = scale(x, 2.0)
        assert len(tape) == 2
        assert y.inputs == (x,)
        assert x.is_leaf and not y.is_leaf

    def test_reused_node_accumulates(self):
        tape = Tape()
        x = tape.leaf(np.array([[1.0, -2.0]]), requires_grad=True)
        loss = sum_all(add(x, scale(x, 3.0)))
        grads = tape.backward(loss)
        assert np.array_equal(grads[x.id], [[4.0, 4.0]])
        assert np.array_equal(x.grad, [[4.0, 4.0]])

    def test_constants_get_no_gradient(self):
        tape = Tape()
        x = tape.leaf(np.ones((3, 2)), requires_grad=True)
        W = tape.constant(np.ones((2, 1)))
        grads = backward(tape, sum_all(linear(x, W)))
        assert set(grads) == {x.id}
        assert W.grad is None

    def test_nodes_without_grad_skip_backward(self):
        tape = Tape()
        y = scale(tape.constant(np.ones(2)), 2.0)
        assert not y.requires_grad
        assert y.backward_fn is None

    def test_loss_must_be_scalar(self):
        tape = Tape()
        x = tape.leaf(np.ones((2, 2)), requires_grad=True)
        with pytest.raises(ShapeMismatchError):
            tape.backward(scale(x, 1.0))

    def test_inputs_from_another_tape(self):
        first, second = Tape(), Tape()
        a = first.leaf(np.ones(2), requires_grad=True)
        b = second.leaf(np.ones(2), requires_grad=True)
        with pytest.raises(ValueError, match="another tape"):
            add(a, b)
        with pytest.raises(ValueError):
            second.backward(sum_all(a))

    def test_wrong_gradient_shape(self):
        tape = Tape()
        x = tape.leaf(np.ones((2, 3)), requires_grad=True)
        bad = tape.record("bad", x.data.sum(), [x], lambda g: (np.ones(3),))
        with pytest.raises(ShapeMismatchError, match="bad"):
            tape.backward(bad)


def test_grad_check_flags_wrong_rule(rng):
    def doubled(inputs):
        (x,) = inputs
        out = x.tape.record("square_sum", np.asarray(np.sum(x.data ** 2)), [x], lambda g: (4.0 * x.data * g,))
        return out

    assert grad_check(doubled, [rng.normal(size=(2, 2)) + 3.0]) > 0.1


def test_grad_check_accepts_correct_rule(rng):
    weights = rng.normal(size=(3, 2))

    def fn(inputs):
        x, W = inputs
        return weighted_sum(linear(x, W), weights)

    assert grad_check(fn, [rng.normal(size=(3, 4)), rng.normal(size=(4, 2))]) < 1e-7
