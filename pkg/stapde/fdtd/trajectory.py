import logging

import numpy as np

from stapde.exceptions import NumericalBlowupError
from stapde.fdtd.fields import Trajectory
from stapde.fdtd.grid import GridSpec, TrajectoryConfig
from stapde.fdtd.yee import SimState, colocate, step

log = logging.getLogger(__name__)


def run_trajectory(cfg: TrajectoryConfig, grid: GridSpec) -> Trajectory:
    """Runs `warmup` core steps, then saves `frames` colocated frames `stride` steps apart."""
    grid.validate()
    cfg.validate(grid)
    sources = cfg.resolved_sources(grid)
    state = SimState(grid, sources, cfg.obstacles)
    data = np.empty((cfg.frames, 3 if grid.spatial_dim == 2 else 6) + grid.dims, dtype=np.float32)
    try:
        for _ in range(cfg.warmup):
            step(state)
        data[0] = colocate(state)
        for f in range(1, cfg.frames):
            for _ in range(cfg.stride):
                step(state)
            data[f] = colocate(state)
    except NumericalBlowupError as e:
        raise NumericalBlowupError(e.where, e.step, f'trajectory seed {cfg.seed}, {len(sources)} sources, grid {grid.dims}')
    log.debug(f'trajectory seed={cfg.seed}: {cfg.frames} frames after {state.step} core steps, {len(sources)} sources')
    return Trajectory(data, grid.dx, cfg.stride, seed=cfg.seed, layout=cfg.layout)
