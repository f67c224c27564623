import configparser
import io
import logging
import os
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from stapde.dataset.manifest import SPLITS
from stapde.exceptions import ConfigurationError
from stapde.fdtd.grid import GridSpec, TrajectoryConfig
from stapde.fdtd.presets import preset_names
from stapde.harness.trainer import TrainConfig
from stapde.models.config import PRESETS, ModelConfig, preset

log = logging.getLogger(__name__)

RESOLVED_CONFIG_NAME = 'config.resolved.ini'
THREADS_VARIABLE = 'STAPDE_THREADS'

DEFAULTS = {
    'experiment': {
        'name': 'experiment',
        'output_dir': 'runs/experiment',
        'data_dir': '',
        'seed': '',
        'store_dir': 'data',
    },
    'grid': {
        'dims': '32 32',
        'dx': '5e-7',
        'pml_cells': '8',
    },
    'trajectory': {
        'frames': '12',
        'stride': '25',
        'warmup': '0',
        'sources': '6',
        'wavelength': '1e-5',
        'amplitude_min': '0.5',
        'amplitude_max': '1.0',
    },
    'splits': {
        'train': '2500',
        'val': '250',
        'test': '250',
        'test_unseen': '0',
        'obstacles': '',
        'unseen_obstacles': '',
        'rel_permittivity': '2.89',
    },
    'model': {
        'presets': 'clifford_resnet_2d, staresnet_2d',
        'channels': '',
        'blocks': '20',
        'kernel': '3',
        'seeds': '0',
    },
    'train': {
        'epochs': '50',
        'batch_size': '32',
        'lr': '1e-3',
    },
    'rollout': {
        'm': '10',
        'splits': 'test, test_unseen',
        'teacher_forcing': 'no',
    },
    'export': {
        'split': 'test',
        'sequences': '0',
        'steps': '1',
    },
    'sweep': {
        'strides': '',
        'channels': '',
    },
}


def _words(value: str) -> List[str]:
    return [w for w in value.replace(',', ' ').split() if w]


class ExperimentOptions:
    name: str
    output_dir: Path
    data_dir: Path
    seed: int
    store_dir: Path
    workers: int
    is_test_mode: bool
    grid: GridSpec
    trajectory: TrajectoryConfig
    split_counts: Dict[str, int]
    obstacle_preset: Optional[str]
    unseen_obstacle_preset: Optional[str]
    rel_permittivity: float
    models: List[ModelConfig]
    train: TrainConfig
    rollout_m: int
    rollout_splits: List[str]
    teacher_forcing: bool
    export_split: str
    export_sequences: List[int]
    export_steps: List[int]
    sweep_strides: List[int]
    sweep_channels: List[List[int]]

    def __init__(self, parser: configparser.ConfigParser = None):
        self.parser = parser if parser is not None else ExperimentOptions.default_parser()
        self.is_test_mode = False
        self.workers = 1

    @staticmethod
    def default_parser() -> configparser.ConfigParser:
        parser = configparser.ConfigParser()
        parser.read_dict(DEFAULTS)
        return parser

    @staticmethod
    def default(seed: int = 0):
        parser = ExperimentOptions.default_parser()
        parser['experiment']['seed'] = str(seed)
        return ExperimentOptions(parser).resolve()

    @staticmethod
    def load(path: Optional[Path], overrides: Sequence[str] = (), output_dir: str = None) -> 'ExperimentOptions':
        parser = ExperimentOptions.default_parser()
        if path is not None:
            path = Path(path)
            if not path.exists():
                raise ConfigurationError('config', f'no config file at {path}')
            file_parser = configparser.ConfigParser()
            try:
                file_parser.read(path)
            except configparser.Error as e:
                raise ConfigurationError('config', f'{path} is not a valid config file: {e}')
            for section in file_parser.sections():
                for key, value in file_parser[section].items():
                    ExperimentOptions._set(parser, section, key, value)
        for override in overrides:
            name, sep, value = override.partition('=')
            section, dot, key = name.strip().partition('.')
            if not sep or not dot:
                raise ConfigurationError(override, 'overrides take the form section.key=value')
            ExperimentOptions._set(parser, section, key.strip(), value.strip())
        if output_dir is not None:
            parser['experiment']['output_dir'] = output_dir
        options = ExperimentOptions(parser).resolve()
        log.debug(f'loaded configuration {options.name} from {path}')
        return options

    @staticmethod
    def _set(parser: configparser.ConfigParser, section: str, key: str, value: str):
        if section not in DEFAULTS:
            raise ConfigurationError(section, f'unknown section, expected one of {sorted(DEFAULTS)}')
        if key not in DEFAULTS[section]:
            raise ConfigurationError(f'{section}.{key}', 'unknown key')
        parser[section][key] = value

    def _get(self, section: str, key: str) -> str:
        return self.parser[section][key].strip()

    def _int(self, section: str, key: str) -> int:
        try:
            return int(self._get(section, key))
        except ValueError:
            raise ConfigurationError(f'{section}.{key}', f'expected an integer, got {self._get(section, key)!r}')

    def _float(self, section: str, key: str) -> float:
        try:
            return float(self._get(section, key))
        except ValueError:
            raise ConfigurationError(f'{section}.{key}', f'expected a number, got {self._get(section, key)!r}')

    def _ints(self, section: str, key: str) -> List[int]:
        try:
            return [int(w) for w in _words(self._get(section, key))]
        except ValueError:
            raise ConfigurationError(f'{section}.{key}', f'expected integers, got {self._get(section, key)!r}')

    def _bool(self, section: str, key: str) -> bool:
        try:
            return self.parser.getboolean(section, key)
        except ValueError:
            raise ConfigurationError(f'{section}.{key}', f'expected yes or no, got {self._get(section, key)!r}')

    def _preset(self, key: str) -> Optional[str]:
        name = self._get('splits', key) or None
        if name is not None and name not in preset_names():
            raise ConfigurationError(f'splits.{key}', f'unknown obstacle preset {name!r}, expected one of {preset_names()}')
        return name

    def resolve(self) -> 'ExperimentOptions':
        self.name = self._get('experiment', 'name')
        if not self._get('experiment', 'seed'):
            raise ConfigurationError('experiment.seed', 'a seed is mandatory')
        self.seed = self._int('experiment', 'seed')
        self.output_dir = Path(self._get('experiment', 'output_dir'))
        data_dir = self._get('experiment', 'data_dir')
        self.data_dir = Path(data_dir) if data_dir else self.output_dir / 'data'
        self.store_dir = Path(self._get('experiment', 'store_dir'))

        self.grid = GridSpec(self._ints('grid', 'dims'), self._float('grid', 'dx'), self._int('grid', 'pml_cells'))
        self.grid.validate()
        self.trajectory = TrajectoryConfig(frames=self._int('trajectory', 'frames'),
                                           stride=self._int('trajectory', 'stride'),
                                           seed=self.seed,
                                           warmup=self._int('trajectory', 'warmup'),
                                           random_sources=self._int('trajectory', 'sources'),
                                           wavelength=self._float('trajectory', 'wavelength'),
                                           amplitude_range=(self._float('trajectory', 'amplitude_min'),
                                                            self._float('trajectory', 'amplitude_max')))
        self.trajectory.validate(self.grid)

        self.split_counts = {split: self._int('splits', split) for split in SPLITS}
        if any(count < 0 for count in self.split_counts.values()):
            raise ConfigurationError('splits', f'trajectory counts must not be negative: {self.split_counts}')
        self.obstacle_preset = self._preset('obstacles')
        self.unseen_obstacle_preset = self._preset('unseen_obstacles')
        if self.split_counts['test_unseen'] and self.unseen_obstacle_preset is None:
            raise ConfigurationError('splits.unseen_obstacles', 'test_unseen trajectories need an obstacle preset')
        self.rel_permittivity = self._float('splits', 'rel_permittivity')
        if self.rel_permittivity < 1.0:
            raise ConfigurationError('splits.rel_permittivity', f'must be at least 1, got {self.rel_permittivity}')

        self.models = self._resolve_models()
        self.train = TrainConfig(epochs=self._int('train', 'epochs'), batch_size=self._int('train', 'batch_size'),
                                 lr=self._float('train', 'lr'), seed=self.seed).validate()

        self.rollout_m = self._int('rollout', 'm')
        if not 1 <= self.rollout_m <= self.trajectory.frames - 2:
            raise ConfigurationError('rollout.m', f'must lie in 1..{self.trajectory.frames - 2}, got {self.rollout_m}')
        self.rollout_splits = self._splits('rollout', 'splits')
        self.teacher_forcing = self._bool('rollout', 'teacher_forcing')

        self.export_split = self._get('export', 'split')
        if self.export_split not in SPLITS:
            raise ConfigurationError('export.split', f'unknown split {self.export_split!r}')
        self.export_sequences = self._ints('export', 'sequences')
        self.export_steps = self._ints('export', 'steps')
        if any(not 1 <= m <= self.trajectory.frames - 2 for m in self.export_steps):
            raise ConfigurationError('export.steps', f'steps must lie in 1..{self.trajectory.frames - 2}')

        self.sweep_strides = self._ints('sweep', 'strides')
        if any(stride < 1 for stride in self.sweep_strides) or len(set(self.sweep_strides)) != len(self.sweep_strides):
            raise ConfigurationError('sweep.strides', f'strides must be distinct and positive, got {self.sweep_strides}')
        return self

    def _resolve_models(self) -> List[ModelConfig]:
        names = _words(self._get('model', 'presets'))
        if not names:
            raise ConfigurationError('model.presets', 'at least one model preset is needed')
        for name in names:
            if name not in PRESETS:
                raise ConfigurationError('model.presets', f'unknown preset {name!r}, expected one of {sorted(PRESETS)}')
        self.sweep_channels = self._channel_groups()
        width_groups = self.sweep_channels or [self._ints('model', 'channels')]
        for widths in width_groups:
            if widths and len(widths) != len(names):
                key = 'sweep.channels' if self.sweep_channels else 'model.channels'
                raise ConfigurationError(key, f'{len(widths)} widths for {len(names)} presets')
        seeds = self._ints('model', 'seeds')
        if not seeds:
            raise ConfigurationError('model.seeds', 'at least one model seed is needed')
        models = []
        for widths in width_groups:
            for i, name in enumerate(names):
                width = widths[i] if widths else None
                label = f'{name}_c{width}' if self.sweep_channels else name
                for seed in seeds:
                    cfg = preset(name, channels=width, blocks=self._int('model', 'blocks'),
                                 kernel=self._int('model', 'kernel'), seed=seed, name=f'{label}_s{seed}')
                    if cfg.spatial_dim != self.grid.spatial_dim:
                        raise ConfigurationError('model.presets', f'{name} works on {cfg.spatial_dim}D fields, '
                                                                  f'the grid is {self.grid.spatial_dim}D')
                    models.append(cfg)
        return models

    def _channel_groups(self) -> List[List[int]]:
        """`sweep.channels` as semicolon-separated groups, one width per preset in each group."""
        groups = [group for group in self._get('sweep', 'channels').split(';') if group.strip()]
        try:
            return [[int(w) for w in _words(group)] for group in groups]
        except ValueError:
            raise ConfigurationError('sweep.channels', f'expected integers, got {self._get("sweep", "channels")!r}')

    def expand(self) -> List['ExperimentOptions']:
        """One experiment per swept time stride, each in its own data and output directory."""
        if not self.sweep_strides:
            return [self]
        data_dir = self._get('experiment', 'data_dir')
        expanded = []
        for stride in self.sweep_strides:
            parser = ExperimentOptions.default_parser()
            parser.read_dict(self.parser)
            parser['experiment']['name'] = f'{self.name}_stride{stride}'
            parser['experiment']['output_dir'] = str(self.output_dir / f'stride{stride}')
            parser['experiment']['data_dir'] = str(Path(data_dir) / f'stride{stride}') if data_dir else ''
            parser['trajectory']['stride'] = str(stride)
            parser['sweep']['strides'] = ''
            options = ExperimentOptions(parser).resolve()
            options.is_test_mode = self.is_test_mode
            options.workers = self.workers
            expanded.append(options)
        return expanded

    def _splits(self, section: str, key: str) -> List[str]:
        splits = _words(self._get(section, key))
        for split in splits:
            if split not in SPLITS:
                raise ConfigurationError(f'{section}.{key}', f'unknown split {split!r}')
        return splits

    def model_dir(self, cfg: ModelConfig) -> Path:
        return self.output_dir / 'models' / cfg.name

    def dumps(self) -> str:
        buffer = io.StringIO()
        self.parser.write(buffer)
        return buffer.getvalue()

    def write_resolved(self, directory: Path = None) -> Path:
        directory = Path(directory) if directory is not None else self.output_dir
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / RESOLVED_CONFIG_NAME
        path.write_text(self.dumps())
        return path

    @staticmethod
    def threads_from_environment() -> int:
        value = os.environ.get(THREADS_VARIABLE, '1')
        try:
            workers = int(value)
        except ValueError:
            raise ConfigurationError(THREADS_VARIABLE, f'expected an integer, got {value!r}')
        if workers < 1:
            raise ConfigurationError(THREADS_VARIABLE, f'must be at least 1, got {workers}')
        return workers
