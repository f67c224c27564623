from unittest import TestCase

import numpy as np

from stapde.fdtd import FieldFrame, Trajectory


class TestBase(TestCase):
    rng: np.random.Generator

    def setUp(self):
        self.rng = np.random.default_rng(77)

    def random_frame(self, grid_shape) -> FieldFrame:
        count = 3 if len(grid_shape) == 2 else 6
        return FieldFrame(self.rng.standard_normal((count,) + tuple(grid_shape)).astype(np.float32))

    def counting_trajectory(self, frames=12, grid_shape=(4, 4), path=None) -> Trajectory:
        """Frame i holds the constant value i in every component."""
        count = 3 if len(grid_shape) == 2 else 6
        data = np.ones((frames, count) + tuple(grid_shape), dtype=np.float32)
        data *= np.arange(frames, dtype=np.float32).reshape((frames,) + (1,) * (len(grid_shape) + 1))
        return Trajectory(data, dx=5e-7, stride=1, path=path)
