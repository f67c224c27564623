import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from stapde.fdtd.container import write_trajectory
from stapde.fdtd.grid import GridSpec, TrajectoryConfig
from stapde.fdtd.presets import ObstacleLayout
from stapde.fdtd.trajectory import run_trajectory

log = logging.getLogger(__name__)

TRAJECTORY_SUFFIX = '.stp'


def trajectory_seeds(seed: int, stream: int, count: int) -> List[int]:
    """Independent per-trajectory seeds; `stream` separates splits generated from one base seed."""
    children = np.random.SeedSequence(entropy=seed, spawn_key=(stream,)).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


def cycled_layout(obstacle_layouts: Sequence[ObstacleLayout], index: int) -> Optional[ObstacleLayout]:
    """Layout of the `index`-th trajectory; layouts are cycled so each appears equally often."""
    if not obstacle_layouts:
        return None
    return obstacle_layouts[index % len(obstacle_layouts)]


def layout_ids(count: int, obstacle_layouts: Sequence[ObstacleLayout] = None) -> List[int]:
    layouts = [cycled_layout(obstacle_layouts, i) for i in range(count)]
    return [layout.layout_id if layout else 0 for layout in layouts]


def trajectory_configs(template: TrajectoryConfig, seeds: Sequence[int],
                       obstacle_layouts: Sequence[ObstacleLayout] = None) -> List[TrajectoryConfig]:
    """One config per seed, each carrying its cycled obstacle layout."""
    configs = []
    for i, seed in enumerate(seeds):
        layout = cycled_layout(obstacle_layouts, i)
        configs.append(TrajectoryConfig(frames=template.frames, stride=template.stride, seed=seed,
                                        sources=template.sources,
                                        obstacles=layout.boxes if layout else template.obstacles,
                                        warmup=template.warmup, random_sources=template.random_sources,
                                        wavelength=template.wavelength, amplitude_range=template.amplitude_range,
                                        layout=layout.layout_id if layout else template.layout))
    return configs


def generate_dataset(grid: GridSpec, template: TrajectoryConfig, count: int, out_dir: Path, prefix: str, seed: int,
                     stream: int = 0, obstacle_layouts: Sequence[ObstacleLayout] = None,
                     workers: int = 1) -> List[Path]:
    """Simulates and writes `count` trajectories; file names and contents depend only on the inputs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    configs = trajectory_configs(template, trajectory_seeds(seed, stream, count), obstacle_layouts)
    paths = [out_dir / f'{prefix}_{i:05d}{TRAJECTORY_SUFFIX}' for i in range(count)]

    def generate(index: int) -> Path:
        trajectory = run_trajectory(configs[index], grid)
        write_trajectory(paths[index], trajectory)
        return paths[index]

    log.info(f'generating {count} {prefix} trajectories on {grid.dims} with {workers} worker(s)')
    if workers <= 1:
        return [generate(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(generate, range(count)))
