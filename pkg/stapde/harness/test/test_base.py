from unittest import TestCase

import numpy as np

from stapde.algebra import Signature
from stapde.fdtd import FieldFrame, Trajectory
from stapde.models import Model, ModelConfig, build
from stapde.mvtensor import TEST_DTYPE


class TestBase(TestCase):
    rng: np.random.Generator

    def setUp(self):
        self.rng = np.random.default_rng(31)

    def random_frame(self, grid_shape, scale=1.0) -> FieldFrame:
        count = 3 if len(grid_shape) == 2 else 6
        return FieldFrame(scale * self.rng.standard_normal((count,) + tuple(grid_shape)))

    def random_trajectory(self, frames=6, grid_shape=(6, 6), stride=25) -> Trajectory:
        count = 3 if len(grid_shape) == 2 else 6
        data = self.rng.standard_normal((frames, count) + tuple(grid_shape)).astype(np.float32)
        return Trajectory(data, dx=5e-7, stride=stride, path='memory')

    def counting_trajectory(self, frames=12, grid_shape=(4, 4)) -> Trajectory:
        """Frame i holds the constant value i in every component."""
        count = 3 if len(grid_shape) == 2 else 6
        data = np.ones((frames, count) + tuple(grid_shape), dtype=np.float32)
        data *= np.arange(frames, dtype=np.float32).reshape((frames,) + (1,) * (len(grid_shape) + 1))
        return Trajectory(data, dx=5e-7, stride=25, path='memory')

    def tiny_model(self, sig: Signature, channels=2, blocks=3, seed=0) -> Model:
        return build(ModelConfig(sig, channels, blocks=blocks, seed=seed, name='tiny'), dtype=TEST_DTYPE)

    def identity_model(self, sig: Signature) -> Model:
        """Two-block model that returns its second input frame: relu(x) - relu(-x)."""
        model = build(ModelConfig(sig, 2, blocks=2, name='identity'), dtype=TEST_DTYPE)
        first, last = model.layers
        for p in model.parameters():
            p.data[...] = 0.0
        center = (1,) * model.config.spatial_dim
        first.weight.data[(0, 1) + center + (0,)] = 1.0
        first.weight.data[(1, 1) + center + (0,)] = -1.0
        last.weight.data[(0, 0) + center + (0,)] = 1.0
        last.weight.data[(0, 1) + center + (0,)] = -1.0
        return model
