from typing import List, Sequence

import numpy as np

from stapde.exceptions import UsageError
from stapde.mvtensor.tape import Parameter


class AdamState:
    lr: float
    beta1: float
    beta2: float
    eps: float
    t: int
    m: List[np.ndarray]
    v: List[np.ndarray]

    def __init__(self, params: Sequence[Parameter], lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p.data) for p in params]
        self.v = [np.zeros_like(p.data) for p in params]


def adam_step(params: Sequence[Parameter], grads: Sequence[np.ndarray], state: AdamState):
    if len(params) != len(grads) or len(params) != len(state.m):
        raise UsageError('adam_step', f'{len(params)} parameters, {len(grads)} gradients, {len(state.m)} moments')
    state.t += 1
    correction1 = 1.0 - state.beta1 ** state.t
    correction2 = 1.0 - state.beta2 ** state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if g is None:
            g = np.zeros_like(p.data)
        if g.shape != p.data.shape:
            raise UsageError('adam_step', f'gradient {g.shape} does not match parameter {p.data.shape}')
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        p.data -= (state.lr * m_hat / (np.sqrt(v_hat) + state.eps)).astype(p.data.dtype)
