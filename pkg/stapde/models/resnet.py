import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from stapde.algebra.signature import Signature
from stapde.exceptions import UsageError
from stapde.models.config import ModelConfig
from stapde.mvtensor import (DEFAULT_DTYPE, ConvKernel, MvTensor, Parameter, Tape, assign_parameters, clifford_conv,
                             ga_relu, read_checkpoint, residual_add, write_checkpoint)

log = logging.getLogger(__name__)


class Model:
    """Residual stack of Clifford convolutions.

    Channel chain in_steps -> C -> ... -> C -> out_steps. The first layer lifts channels and is followed
    by a ReLU; every middle layer is wrapped as h + relu(conv(h)); the last layer collapses channels
    and has no activation so predicted fields keep their sign.
    """
    config: ModelConfig
    layers: List[ConvKernel]

    def __init__(self, config: ModelConfig, layers: List[ConvKernel]):
        self.config = config
        self.layers = layers

    @property
    def signature(self) -> Signature:
        return self.config.algebra

    @property
    def dtype(self):
        return self.layers[0].weight.dtype

    def parameters(self) -> List[Parameter]:
        params = []
        for layer in self.layers:
            params.append(layer.weight)
            params.append(layer.bias)
        return params

    def zero_grad(self):
        for p in self.parameters():
            p.zero_grad()

    def param_count(self) -> int:
        return sum(layer.parameter_count() for layer in self.layers)

    def forward(self, x: MvTensor, tape: Optional[Tape] = None) -> MvTensor:
        if x.signature != self.signature:
            raise UsageError('forward', f'input lives in {x.signature.name}, model in {self.signature.name}')
        if x.data.ndim != self.config.spatial_dim + 3:
            raise UsageError('forward', f'expected {self.config.spatial_dim} spatial axes, got input shape {x.shape}')
        if x.channels != self.config.in_steps:
            raise UsageError('forward', f'expected {self.config.in_steps} input channels, got {x.channels}')

        h = ga_relu(clifford_conv(x, self.layers[0], tape=tape), tape=tape)
        for layer in self.layers[1:-1]:
            h = residual_add(h, ga_relu(clifford_conv(h, layer, tape=tape), tape=tape), tape=tape)
        return clifford_conv(h, self.layers[-1], tape=tape)

    def __call__(self, x: MvTensor, tape: Optional[Tape] = None) -> MvTensor:
        return self.forward(x, tape)

    def astype(self, dtype) -> 'Model':
        layers = [ConvKernel(Parameter(k.signature, k.weight.data.astype(dtype), k.weight.name),
                             Parameter(k.signature, k.bias.data.astype(dtype), k.bias.name)) for k in self.layers]
        return Model(self.config, layers)


def channel_chain(cfg: ModelConfig) -> List[tuple]:
    """(Cin, Cout) per convolution in execution order."""
    c = cfg.channels
    return [(cfg.in_steps, c)] + [(c, c)] * (cfg.blocks - 2) + [(c, cfg.out_steps)]


def build(cfg: ModelConfig, dtype=DEFAULT_DTYPE) -> Model:
    cfg.validate()
    sig = cfg.algebra
    taps = (cfg.kernel,) * cfg.spatial_dim
    rng = np.random.default_rng(cfg.seed)
    layers = []
    for i, (cin, cout) in enumerate(channel_chain(cfg)):
        scale = math.sqrt(1.0 / (cin * cfg.kernel ** cfg.spatial_dim * sig.size))
        weight = rng.uniform(-scale, scale, (cout, cin) + taps + (sig.size,))
        bias = np.zeros((cout, sig.size))
        layers.append(ConvKernel(Parameter(sig, weight.astype(dtype), f'conv{i}.weight'),
                                 Parameter(sig, bias.astype(dtype), f'conv{i}.bias')))
    model = Model(cfg, layers)
    log.debug(f'built {cfg} with {model.param_count()} parameters')
    return model


def param_count(model: Model) -> int:
    return model.param_count()


def formula_param_count(cfg: ModelConfig) -> int:
    per_tap = cfg.kernel ** cfg.spatial_dim * cfg.algebra.size
    return sum(cout * cin * per_tap + cout * cfg.algebra.size for cin, cout in channel_chain(cfg))


def channel_sweep(algebra: Signature, spatial_dim: int, channels: Sequence[int], blocks: int = 20,
                  kernel: int = 3) -> Dict[int, int]:
    """Parameter count for each channel width, without allocating weights."""
    counts = {}
    for c in channels:
        cfg = ModelConfig(algebra, c, blocks=blocks, kernel=kernel, spatial_dim=spatial_dim).validate()
        counts[c] = formula_param_count(cfg)
    return counts


def save_checkpoint(path: Path, model: Model):
    write_checkpoint(path, model.config.as_dict(), model.parameters())


def load_checkpoint(path: Path, dtype=DEFAULT_DTYPE) -> Model:
    path = Path(path)
    if not path.exists():
        raise UsageError('load_checkpoint', f'no checkpoint at {path}')
    config, values = read_checkpoint(path)
    model = build(ModelConfig.from_dict(config), dtype=dtype)
    assign_parameters(model.parameters(), values, path)
    log.info(f'loaded {model.config.name} from {path}')
    return model
