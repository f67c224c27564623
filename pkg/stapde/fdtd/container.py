import logging
import struct
from pathlib import Path

import numpy as np

from stapde.exceptions import ContainerFormatError
from stapde.fdtd.fields import Trajectory

log = logging.getLogger(__name__)

MAGIC = b'STAPDE01'
VERSION = 1
# magic, version, spatial dim, dims x3 (unused axes = 1), dx, stride, frames, components
HEADER = struct.Struct('<8sIB3IdIIB')


def write_trajectory(path: Path, trajectory: Trajectory):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dims = tuple(trajectory.grid_shape) + (1,) * (3 - trajectory.spatial_dim)
    header = HEADER.pack(MAGIC, VERSION, trajectory.spatial_dim, *dims, trajectory.dx, trajectory.stride,
                         trajectory.frames, trajectory.data.shape[1])
    with path.open('wb') as f:
        f.write(header)
        f.write(np.ascontiguousarray(trajectory.data, dtype='<f4').tobytes())
    log.debug(f'wrote {path} ({trajectory.frames} frames)')


def read_trajectory(path: Path) -> Trajectory:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < HEADER.size:
        raise ContainerFormatError(path, 'truncated header')
    magic, version, spatial_dim, l, m, n, dx, stride, frames, count = HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise ContainerFormatError(path, f'bad magic {magic!r}')
    if version != VERSION:
        raise ContainerFormatError(path, f'unsupported version {version}')
    if spatial_dim not in (2, 3) or count != (3 if spatial_dim == 2 else 6):
        raise ContainerFormatError(path, f'{spatial_dim}D container with {count} components')
    dims = (l, m, n)[:spatial_dim]
    if spatial_dim == 2 and n != 1:
        raise ContainerFormatError(path, f'unused axis holds {n} cells')
    shape = (frames, count) + dims
    expected = HEADER.size + 4 * int(np.prod(shape))
    if len(raw) != expected:
        raise ContainerFormatError(path, f'expected {expected} bytes, found {len(raw)}')
    data = np.frombuffer(raw, dtype='<f4', offset=HEADER.size).reshape(shape)
    return Trajectory(data.astype(np.float32), dx, stride, path=str(path))
