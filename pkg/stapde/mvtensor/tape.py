import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from stapde.algebra.signature import Signature
from stapde.exceptions import UsageError

log = logging.getLogger(__name__)

DEFAULT_DTYPE = np.float32
TEST_DTYPE = np.float64


class Node:
    """Array value taking part in reverse-mode differentiation."""
    data: np.ndarray
    grad: Optional[np.ndarray]
    requires_grad: bool

    def __init__(self, data: np.ndarray, requires_grad: bool = False):
        self.data = data
        self.grad = None
        self.requires_grad = requires_grad

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def item(self) -> float:
        return float(self.data)

    def accumulate(self, grad: np.ndarray):
        if self.grad is None:
            self.grad = np.array(grad, dtype=self.data.dtype, copy=True)
        else:
            self.grad += grad

    def zero_grad(self):
        self.grad = None


class MvTensor(Node):
    """Tensor of multivector coefficients shaped (batch, channels, *spatial, blades)."""
    signature: Signature

    def __init__(self, signature: Signature, data: np.ndarray, requires_grad: bool = False):
        data = np.ascontiguousarray(data)
        if data.ndim < 1 or data.shape[-1] != signature.size:
            raise UsageError('MvTensor', f'last axis must hold {signature.size} blades for {signature.name}, got shape {data.shape}')
        super().__init__(data, requires_grad)
        self.signature = signature

    @classmethod
    def zeros(cls, signature: Signature, shape: Sequence[int], dtype=DEFAULT_DTYPE) -> 'MvTensor':
        return cls(signature, np.zeros(tuple(shape) + (signature.size,), dtype=dtype))

    @classmethod
    def from_array(cls, signature: Signature, array: np.ndarray, dtype=DEFAULT_DTYPE) -> 'MvTensor':
        return cls(signature, np.asarray(array, dtype=dtype))

    @property
    def batch(self) -> int:
        return self.data.shape[0]

    @property
    def channels(self) -> int:
        return self.data.shape[1]

    @property
    def spatial(self) -> Tuple[int, ...]:
        return self.data.shape[2:-1]

    def astype(self, dtype) -> 'MvTensor':
        return MvTensor(self.signature, self.data.astype(dtype), self.requires_grad)

    def __repr__(self):
        return f'MvTensor({self.signature.name}, shape={self.data.shape}, dtype={self.data.dtype})'


class Parameter(MvTensor):
    name: str

    def __init__(self, signature: Signature, data: np.ndarray, name: str = ''):
        super().__init__(signature, data, requires_grad=True)
        self.name = name

    def __repr__(self):
        return f'Parameter({self.name}, shape={self.data.shape})'


BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class TapeEntry:
    def __init__(self, op: str, output: Node, inputs: Sequence[Node], backward: BackwardFn):
        self.op = op
        self.output = output
        self.inputs = inputs
        self.backward = backward


class Tape:
    """Ordered record of executed primitive ops.

    `backward` walks the record in exact reverse order; gradients accumulate additively on every
    input that requires them.
    """
    entries: List[TapeEntry]

    def __init__(self):
        self.entries = []

    def record(self, op: str, output: Node, inputs: Sequence[Node], backward: BackwardFn) -> Node:
        if any(node.requires_grad for node in inputs):
            output.requires_grad = True
        self.entries.append(TapeEntry(op, output, inputs, backward))
        return output

    def backward(self, loss: Node):
        if not self.entries or loss is not self.entries[-1].output:
            raise UsageError('backward', 'the loss was not produced by the last op recorded on this tape')
        if loss.data.shape != ():
            raise UsageError('backward', f'loss must be a scalar, got shape {loss.data.shape}')

        loss.grad = np.ones((), dtype=loss.data.dtype)
        for entry in reversed(self.entries):
            if entry.output.grad is None or not entry.output.requires_grad:
                continue
            input_grads = entry.backward(entry.output.grad)
            for node, grad in zip(entry.inputs, input_grads):
                if grad is not None and node.requires_grad:
                    node.accumulate(grad)
        log.debug(f'backward pass over {len(self.entries)} ops')
        self.entries = []
