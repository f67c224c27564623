from typing import Optional, Tuple

import numpy as np

from stapde.exceptions import UsageError
from stapde.fdtd.yee import COMPONENTS_2D, COMPONENTS_3D


def component_names(spatial_dim: int) -> Tuple[str, ...]:
    return COMPONENTS_2D if spatial_dim == 2 else COMPONENTS_3D


class FieldFrame:
    """Cell-centred field components shaped (components, *grid): (Ex, Ey, Bz) in 2D, six in 3D."""
    components: np.ndarray

    def __init__(self, components: np.ndarray):
        components = np.asarray(components)
        if components.ndim not in (3, 4) or components.shape[0] != (3 if components.ndim == 3 else 6):
            raise UsageError('FieldFrame', f'expected (3, M, N) or (6, L, M, N) components, got {components.shape}')
        if not np.all(np.isfinite(components)):
            raise UsageError('FieldFrame', 'field values must be finite')
        self.components = components

    @property
    def spatial_dim(self) -> int:
        return self.components.ndim - 1

    @property
    def grid_shape(self) -> Tuple[int, ...]:
        return self.components.shape[1:]

    @property
    def names(self) -> Tuple[str, ...]:
        return component_names(self.spatial_dim)

    def component(self, name: str) -> np.ndarray:
        return self.components[self.names.index(name)]

    @staticmethod
    def zeros(grid_shape, dtype=np.float32) -> 'FieldFrame':
        count = 3 if len(grid_shape) == 2 else 6
        return FieldFrame(np.zeros((count,) + tuple(grid_shape), dtype=dtype))

    def __repr__(self):
        return f'FieldFrame({"/".join(self.names)}, grid={self.grid_shape})'


class Trajectory:
    """Saved frames of one simulation, shaped (frames, components, *grid), 32-bit."""
    data: np.ndarray
    dx: float
    stride: int
    seed: Optional[int]
    path: Optional[str]
    # obstacle layout number; not part of the container, restored from the split manifest
    layout: int

    def __init__(self, data: np.ndarray, dx: float, stride: int, seed: int = None, path: str = None, layout: int = 0):
        self.data = np.ascontiguousarray(data, dtype=np.float32)
        self.dx = dx
        self.stride = stride
        self.seed = seed
        self.path = path
        self.layout = layout

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def spatial_dim(self) -> int:
        return self.data.ndim - 2

    @property
    def grid_shape(self) -> Tuple[int, ...]:
        return self.data.shape[2:]

    def frame(self, index: int) -> FieldFrame:
        return FieldFrame(self.data[index])

    def __len__(self):
        return self.frames

    def __repr__(self):
        return f'Trajectory(frames={self.frames}, grid={self.grid_shape}, stride={self.stride}, path={self.path})'
