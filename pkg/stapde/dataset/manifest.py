import configparser
import logging
from pathlib import Path
from typing import Dict, List

from stapde.dataset.windows import Sample, window
from stapde.exceptions import ConfigurationError, UsageError
from stapde.fdtd.container import read_trajectory
from stapde.fdtd.fields import Trajectory

log = logging.getLogger(__name__)

SPLITS = ('train', 'val', 'test', 'test_unseen')
MANIFEST_NAME = 'manifest.ini'


class SplitManifest:
    """Trajectory files per split, relative to the manifest's directory, with the obstacle layout of each."""
    root: Path
    files: Dict[str, List[str]]
    frames: Dict[str, int]
    obstacle_layouts: Dict[str, List[int]]

    def __init__(self, root: Path, files: Dict[str, List[str]] = None, frames: Dict[str, int] = None,
                 obstacle_layouts: Dict[str, List[int]] = None):
        self.root = Path(root)
        self.files = {k: list(v) for k, v in (files or {}).items()}
        self.frames = dict(frames or {})
        obstacle_layouts = obstacle_layouts or {}
        self.obstacle_layouts = {k: list(obstacle_layouts.get(k) or [0] * len(v)) for k, v in self.files.items()}

    def add(self, split: str, path: Path, frame_count: int, layout: int = 0):
        if split not in SPLITS:
            raise ConfigurationError('splits', f'unknown split {split!r}')
        relative = Path(path).resolve().relative_to(self.root.resolve()).as_posix()
        self.files.setdefault(split, []).append(relative)
        self.frames[split] = self.frames.get(split, 0) + frame_count
        self.obstacle_layouts.setdefault(split, []).append(layout)

    def splits(self) -> List[str]:
        return [s for s in SPLITS if self.files.get(s)]

    def has(self, split: str) -> bool:
        return bool(self.files.get(split))

    def paths(self, split: str) -> List[Path]:
        if not self.has(split):
            raise UsageError('manifest', f'split {split!r} is empty or missing in {self.root}')
        return [self.root / name for name in self.files[split]]

    def layouts(self, split: str) -> List[int]:
        return list(self.obstacle_layouts.get(split, []))

    def trajectories(self, split: str) -> List[Trajectory]:
        trajectories = [read_trajectory(path) for path in self.paths(split)]
        for trajectory, layout in zip(trajectories, self.obstacle_layouts[split]):
            trajectory.layout = layout
        return trajectories

    def samples(self, split: str) -> List[Sample]:
        samples = []
        for trajectory in self.trajectories(split):
            samples.extend(window(trajectory))
        return samples

    def validate(self):
        seen = {}
        for split in self.splits():
            for name in self.files[split]:
                if name in seen:
                    raise ConfigurationError('splits', f'{name} appears in both {seen[name]} and {split}')
                seen[name] = split
            if len(self.obstacle_layouts.get(split, [])) != len(self.files[split]):
                raise ConfigurationError('splits', f'{split} lists {len(self.files[split])} files but '
                                                   f'{len(self.obstacle_layouts.get(split, []))} layouts')
        return self

    def save(self, path: Path = None) -> Path:
        self.validate()
        path = Path(path) if path else self.root / MANIFEST_NAME
        parser = configparser.ConfigParser()
        for split in self.splits():
            parser[split] = {
                'frames': str(self.frames.get(split, 0)),
                'trajectories': str(len(self.files[split])),
                'files': '\n'.join(self.files[split]),
                'layouts': ' '.join(str(layout) for layout in self.obstacle_layouts[split]),
            }
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w') as f:
            parser.write(f)
        return path

    @staticmethod
    def load(path: Path) -> 'SplitManifest':
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_NAME
        if not path.exists():
            raise UsageError('manifest', f'no split manifest at {path}; run gen first')
        parser = configparser.ConfigParser()
        parser.read(path)
        files, frames, obstacle_layouts = {}, {}, {}
        for split in parser.sections():
            if split not in SPLITS:
                raise ConfigurationError('splits', f'unknown split {split!r} in {path}')
            files[split] = [line.strip() for line in parser[split].get('files', '').splitlines() if line.strip()]
            frames[split] = parser[split].getint('frames', 0)
            try:
                obstacle_layouts[split] = [int(v) for v in parser[split].get('layouts', '').split()]
            except ValueError:
                raise ConfigurationError('splits', f'layouts of {split} in {path} must be integers')
        return SplitManifest(path.parent, files, frames, obstacle_layouts).validate()
