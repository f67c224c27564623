from typing import Dict

from stapde.algebra.signature import G2, G3, STA2, STA3, Signature, algebra_by_name, algebra_name
from stapde.exceptions import ConfigurationError

# spatial dimension carried by each shipped algebra's field embedding
SPATIAL_DIMS = {G2: 2, STA2: 2, G3: 3, STA3: 3}


class ModelConfig:
    name: str
    algebra: Signature
    spatial_dim: int
    blocks: int
    channels: int
    kernel: int
    in_steps: int
    out_steps: int
    seed: int

    def __init__(self, algebra: Signature, channels: int, blocks: int = 20, kernel: int = 3, spatial_dim: int = None,
                 in_steps: int = 2, out_steps: int = 1, seed: int = 0, name: str = ''):
        self.algebra = algebra
        self.channels = channels
        self.blocks = blocks
        self.kernel = kernel
        self.spatial_dim = spatial_dim if spatial_dim is not None else SPATIAL_DIMS.get(algebra, 0)
        self.in_steps = in_steps
        self.out_steps = out_steps
        self.seed = seed
        self.name = name or f'{algebra_name(algebra)}_resnet_{self.spatial_dim}d'

    def validate(self):
        if self.algebra not in SPATIAL_DIMS:
            raise ConfigurationError('model.algebra', f'{self.algebra.name} has no field embedding')
        if self.spatial_dim != SPATIAL_DIMS[self.algebra]:
            raise ConfigurationError('model.spatial_dim',
                                     f'{self.algebra.name} embeds {SPATIAL_DIMS[self.algebra]}D fields, got {self.spatial_dim}')
        if self.blocks < 2:
            raise ConfigurationError('model.blocks', f'at least 2 blocks are needed, got {self.blocks}')
        if self.channels < 1:
            raise ConfigurationError('model.channels', f'must be positive, got {self.channels}')
        if self.kernel < 1 or self.kernel % 2 == 0:
            raise ConfigurationError('model.kernel', f'must be a positive odd tap count, got {self.kernel}')
        if self.in_steps != 2:
            raise ConfigurationError('model.in_steps', f'the network consumes two frames, got {self.in_steps}')
        if self.out_steps != 1:
            raise ConfigurationError('model.out_steps', f'the network predicts one frame, got {self.out_steps}')
        return self

    def as_dict(self) -> Dict:
        return {
            'name': self.name,
            'algebra': algebra_name(self.algebra),
            'spatial_dim': self.spatial_dim,
            'blocks': self.blocks,
            'channels': self.channels,
            'kernel': self.kernel,
            'in_steps': self.in_steps,
            'out_steps': self.out_steps,
            'seed': self.seed,
        }

    @staticmethod
    def from_dict(values: Dict) -> 'ModelConfig':
        try:
            return ModelConfig(algebra=algebra_by_name(values['algebra']),
                               channels=int(values['channels']),
                               blocks=int(values['blocks']),
                               kernel=int(values['kernel']),
                               spatial_dim=int(values['spatial_dim']),
                               in_steps=int(values['in_steps']),
                               out_steps=int(values['out_steps']),
                               seed=int(values['seed']),
                               name=values['name']).validate()
        except KeyError as e:
            raise ConfigurationError('model', f'missing key {e} in model description')

    def __repr__(self):
        return f'ModelConfig({self.name}, {self.algebra.name}, blocks={self.blocks}, C={self.channels})'


# name -> (algebra, default channels)
PRESETS = {
    'clifford_resnet_2d': (G2, 32),
    'staresnet_2d': (STA2, 24),
    'clifford_resnet_3d': (G3, 11),
    'staresnet_3d': (STA3, 8),
}


def preset(preset_name: str, **overrides) -> ModelConfig:
    """Preset defaults with any non-None overrides applied; `name` defaults to the preset name."""
    try:
        algebra, channels = PRESETS[preset_name]
    except KeyError:
        raise ConfigurationError('model.preset', f'unknown preset {preset_name!r}, expected one of {sorted(PRESETS)}')
    values = {'channels': channels, 'name': preset_name}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ModelConfig(algebra, **values).validate()
