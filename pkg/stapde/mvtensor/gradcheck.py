from typing import Callable, Sequence

import numpy as np

from stapde.mvtensor.tape import Node, Tape


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    denominator = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-8)
    return float(np.max(np.abs(a - b) / denominator))


def numerical_gradient(loss_fn: Callable[[], float], node: Node, h: float = 1e-3) -> np.ndarray:
    """Central differences of a scalar function with respect to every entry of `node.data`."""
    grad = np.zeros_like(node.data)
    flat = node.data.reshape(-1)
    flat_grad = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + h
        plus = loss_fn()
        flat[i] = original - h
        minus = loss_fn()
        flat[i] = original
        flat_grad[i] = (plus - minus) / (2 * h)
    return grad


def gradcheck(build_loss: Callable[[Tape], Node], nodes: Sequence[Node], h: float = 1e-3) -> float:
    """Maximum relative error between taped and finite-difference gradients over `nodes`.

    `build_loss(tape)` runs the forward pass; it is called with `None` while probing.
    """
    for node in nodes:
        node.zero_grad()
    tape = Tape()
    loss = build_loss(tape)
    tape.backward(loss)
    worst = 0.0
    for node in nodes:
        analytic = node.grad if node.grad is not None else np.zeros_like(node.data)
        numeric = numerical_gradient(lambda: build_loss(None).item(), node, h)
        worst = max(worst, relative_error(analytic, numeric))
    return worst
