import itertools
import logging
from typing import Optional, Sequence

import numpy as np

from stapde.algebra.cayley import build_table
from stapde.exceptions import UsageError
from stapde.mvtensor.tape import MvTensor, Node, Parameter, Tape

log = logging.getLogger(__name__)

PADDING_MODES = ('same', 'valid')


class ConvKernel:
    """Multivector-valued convolution kernel.

    weight: (Cout, Cin, k_1..k_d, blades), bias: (Cout, blades).
    """
    weight: Parameter
    bias: Parameter

    def __init__(self, weight: Parameter, bias: Parameter):
        if weight.signature != bias.signature:
            raise UsageError('ConvKernel', 'weight and bias must share a signature')
        taps = weight.shape[2:-1]
        if any(k % 2 == 0 for k in taps):
            raise UsageError('ConvKernel', f'spatial taps must be odd, got {taps}')
        if bias.shape != (weight.shape[0], weight.signature.size):
            raise UsageError('ConvKernel', f'bias shape {bias.shape} does not match {weight.shape[0]} output channels')
        self.weight = weight
        self.bias = bias

    @property
    def signature(self):
        return self.weight.signature

    @property
    def out_channels(self) -> int:
        return self.weight.shape[0]

    @property
    def in_channels(self) -> int:
        return self.weight.shape[1]

    @property
    def taps(self):
        return self.weight.shape[2:-1]

    def parameter_count(self) -> int:
        return self.weight.data.size + self.bias.data.size


def _mixing_kernel(weight: np.ndarray, dense: np.ndarray) -> np.ndarray:
    # (Cout, Cin, P, I) x (I, J, K) -> (Cout, Cin, P, K, J): left multiplication by the weight multivector
    return np.einsum('ocpi,ijk->ocpkj', weight, dense.astype(weight.dtype))


def _offsets(taps):
    return list(itertools.product(*[range(k) for k in taps]))


def _window(offset, spatial):
    return tuple(slice(o, o + s) for o, s in zip(offset, spatial))


def clifford_conv(x: MvTensor, kern: ConvKernel, padding: str = 'same', tape: Optional[Tape] = None) -> MvTensor:
    """out[b, co, p] = bias[co] + sum_ci sum_offset gp(weight[co, ci, offset], x[b, ci, p + offset])."""
    if x.signature != kern.signature:
        raise UsageError('clifford_conv', f'signature mismatch: {x.signature.name} vs {kern.signature.name}')
    if x.channels != kern.in_channels:
        raise UsageError('clifford_conv', f'input has {x.channels} channels, kernel expects {kern.in_channels}')
    if len(x.spatial) != len(kern.taps):
        raise UsageError('clifford_conv', f'{len(x.spatial)}-d input with a {len(kern.taps)}-d kernel')
    if padding not in PADDING_MODES:
        raise UsageError('clifford_conv', f'unknown padding {padding!r}')

    d = len(kern.taps)
    cout, cin = kern.out_channels, kern.in_channels
    size = x.signature.size
    dense = build_table(x.signature).dense()
    weight = kern.weight.data.reshape(cout, cin, -1, size)
    mixing = _mixing_kernel(weight, dense)

    if padding == 'same':
        pad = [(0, 0), (0, 0)] + [(k // 2, k // 2) for k in kern.taps] + [(0, 0)]
        xpad = np.pad(x.data, pad)
        out_spatial = x.spatial
    else:
        xpad = x.data
        out_spatial = tuple(s - k + 1 for s, k in zip(x.spatial, kern.taps))
        if any(s < 1 for s in out_spatial):
            raise UsageError('clifford_conv', f'input {x.spatial} smaller than kernel {kern.taps}')

    offsets = _offsets(kern.taps)
    spatial_axes = list(range(2, 2 + d))
    out = np.zeros((x.batch,) + tuple(out_spatial) + (cout, size), dtype=x.data.dtype)
    for p, offset in enumerate(offsets):
        xs = xpad[(slice(None), slice(None)) + _window(offset, out_spatial)]
        # contract input channel and input blade: (B, *S, Cout, K)
        out += np.tensordot(xs, mixing[:, :, p], axes=([1, 1 + d + 1], [1, 3]))
    out = np.moveaxis(out, -2, 1)
    out += kern.bias.data.reshape((1, cout) + (1,) * d + (size,))
    result = MvTensor(x.signature, out)

    if tape is not None:
        def backward(gout: np.ndarray):
            g = np.moveaxis(gout, 1, -2)  # (B, *S, Cout, K)
            grad_bias = gout.sum(axis=tuple([0] + spatial_axes))
            grad_mixing = np.zeros_like(mixing)
            grad_xpad = np.zeros_like(xpad) if x.requires_grad else None
            batch_and_space = list(range(0, 1 + d))
            for p, offset in enumerate(offsets):
                window = (slice(None), slice(None)) + _window(offset, out_spatial)
                xs = xpad[window]
                # (Cout, K, Cin, J)
                gm = np.tensordot(g, xs, axes=(batch_and_space, [0] + spatial_axes))
                grad_mixing[:, :, p] = np.transpose(gm, (0, 2, 1, 3))
                if grad_xpad is not None:
                    # (B, *S, Cin, J)
                    gx = np.tensordot(g, mixing[:, :, p], axes=([1 + d, 2 + d], [0, 2]))
                    grad_xpad[window] += np.moveaxis(gx, -2, 1)
            grad_weight = np.einsum('ocpkj,ijk->ocpi', grad_mixing, dense.astype(grad_mixing.dtype))
            grad_x = None
            if grad_xpad is not None:
                if padding == 'same':
                    crop = (slice(None), slice(None)) + tuple(slice(k // 2, k // 2 + s) for k, s in zip(kern.taps, x.spatial))
                    grad_x = grad_xpad[crop]
                else:
                    grad_x = grad_xpad
            return grad_x, grad_weight.reshape(kern.weight.shape), grad_bias

        tape.record('clifford_conv', result, (x, kern.weight, kern.bias), backward)
    return result


def ga_relu(x: MvTensor, tape: Optional[Tape] = None) -> MvTensor:
    """max(0, c) on every blade coefficient independently."""
    result = MvTensor(x.signature, np.maximum(x.data, 0))
    if tape is not None:
        active = x.data > 0
        tape.record('ga_relu', result, (x,), lambda gout: (gout * active,))
    return result


def residual_add(x: MvTensor, y: MvTensor, tape: Optional[Tape] = None) -> MvTensor:
    if x.signature != y.signature or x.shape != y.shape:
        raise UsageError('residual_add', f'shape mismatch: {x.shape} vs {y.shape}')
    result = MvTensor(x.signature, x.data + y.data)
    if tape is not None:
        tape.record('residual_add', result, (x, y), lambda gout: (gout, gout))
    return result


def mse_loss(pred: MvTensor, target: MvTensor, mask: Sequence[int], tape: Optional[Tape] = None) -> Node:
    """Squared error summed over masked blades and channels, averaged over batch and grid.

    For a single 2D sample this is the 1/(MN) normalized sum over field components; in 3D the
    1/(LMN) one.
    """
    mask = list(mask)
    if not mask:
        raise UsageError('mse_loss', 'the blade mask is empty')
    if pred.signature != target.signature or pred.shape != target.shape:
        raise UsageError('mse_loss', f'prediction {pred.shape} and target {target.shape} differ')
    if any(not 0 <= m < pred.signature.size for m in mask):
        raise UsageError('mse_loss', f'mask {mask} addresses blades outside {pred.signature.name}')

    positions = pred.batch * int(np.prod(pred.spatial))
    diff = pred.data[..., mask] - target.data[..., mask]
    value = np.sum(diff * diff) / positions
    result = Node(np.asarray(value, dtype=pred.data.dtype))

    if tape is not None:
        def backward(gout: np.ndarray):
            grad = np.zeros_like(pred.data)
            grad[..., mask] = (2.0 / positions) * diff * gout
            return grad, None

        tape.record('mse_loss', result, (pred, target), backward)
    return result
