import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from stapde.exceptions import ConfigurationError

MIN_CELLS = 8
DEFAULT_DX = 5e-7
DEFAULT_WAVELENGTH = 1e-5
DEFAULT_PML_CELLS = 8
COURANT = 0.5

# a 3D planar source drives the E component normal to its plane
PLANE_COMPONENTS = {'xy': 'Ez', 'yz': 'Ex', 'xz': 'Ey'}
# axis held at the mid-plane for each plane tag
PLANE_NORMAL_AXIS = {'xy': 2, 'yz': 0, 'xz': 1}


class GridSpec:
    """Physical region of the simulation in cells; PML layers are added outside `dims`."""
    dims: Tuple[int, ...]
    dx: float
    pml_cells: int

    def __init__(self, dims: Sequence[int], dx: float = DEFAULT_DX, pml_cells: int = DEFAULT_PML_CELLS):
        self.dims = tuple(int(d) for d in dims)
        self.dx = float(dx)
        self.pml_cells = int(pml_cells)

    def validate(self):
        if len(self.dims) not in (2, 3):
            raise ConfigurationError('grid.dims', f'expected 2 or 3 axes, got {self.dims}')
        if any(d < MIN_CELLS for d in self.dims):
            raise ConfigurationError('grid.dims', f'every axis needs at least {MIN_CELLS} cells, got {self.dims}')
        if not self.dx > 0:
            raise ConfigurationError('grid.dx', f'must be positive, got {self.dx}')
        if self.pml_cells < 0:
            raise ConfigurationError('grid.pml_cells', f'must not be negative, got {self.pml_cells}')
        return self

    @property
    def spatial_dim(self) -> int:
        return len(self.dims)

    @property
    def total_dims(self) -> Tuple[int, ...]:
        return tuple(d + 2 * self.pml_cells for d in self.dims)

    @property
    def dt(self) -> float:
        """Core time step in natural units (c = 1, one cell = one length unit)."""
        return COURANT / math.sqrt(self.spatial_dim)

    def cells(self, length: float) -> float:
        return length / self.dx

    def contains(self, position: Sequence[int]) -> bool:
        return len(position) == self.spatial_dim and all(0 <= p < d for p, d in zip(position, self.dims))

    def __repr__(self):
        return f'GridSpec(dims={self.dims}, dx={self.dx}, pml={self.pml_cells})'


class SourceSpec:
    """Soft point source emitting amplitude * sin(2 pi t / wavelength + phase)."""
    position: Tuple[int, ...]
    wavelength: float
    amplitude: float
    phase: float
    plane: Optional[str]
    cutoff_step: Optional[int]

    def __init__(self, position: Sequence[int], wavelength: float = DEFAULT_WAVELENGTH, amplitude: float = 1.0,
                 phase: float = 0.0, plane: str = None, cutoff_step: int = None):
        self.position = tuple(int(p) for p in position)
        self.wavelength = float(wavelength)
        self.amplitude = float(amplitude)
        self.phase = float(phase)
        self.plane = plane
        self.cutoff_step = cutoff_step

    def validate(self, grid: GridSpec):
        if not grid.contains(self.position):
            raise ConfigurationError('source.position', f'{self.position} lies outside {grid.dims}')
        if not self.wavelength > 0:
            raise ConfigurationError('source.wavelength', f'must be positive, got {self.wavelength}')
        if grid.spatial_dim == 3 and self.plane not in PLANE_COMPONENTS:
            raise ConfigurationError('source.plane', f'3D sources need a plane tag in {sorted(PLANE_COMPONENTS)}')
        return self

    def __repr__(self):
        return (f'SourceSpec(at={self.position}, amp={self.amplitude:.3f}, phase={self.phase:.3f}'
                f'{", plane=" + self.plane if self.plane else ""})')


class ObstacleSpec:
    """Axis-aligned dielectric box covering cells lo <= c < hi."""
    lo: Tuple[int, ...]
    hi: Tuple[int, ...]
    rel_permittivity: float

    def __init__(self, lo: Sequence[int], hi: Sequence[int], rel_permittivity: float = 1.7 ** 2):
        self.lo = tuple(int(v) for v in lo)
        self.hi = tuple(int(v) for v in hi)
        self.rel_permittivity = float(rel_permittivity)

    def validate(self, grid: GridSpec):
        if len(self.lo) != grid.spatial_dim or len(self.hi) != grid.spatial_dim:
            raise ConfigurationError('obstacle.region', f'box {self.lo}..{self.hi} does not match a {grid.spatial_dim}D grid')
        if any(not 0 <= lo < hi <= d for lo, hi, d in zip(self.lo, self.hi, grid.dims)):
            raise ConfigurationError('obstacle.region', f'box {self.lo}..{self.hi} is empty or outside {grid.dims}')
        if self.rel_permittivity < 1:
            raise ConfigurationError('obstacle.rel_permittivity', f'must be >= 1, got {self.rel_permittivity}')
        return self

    def __repr__(self):
        return f'ObstacleSpec({self.lo}..{self.hi}, eps={self.rel_permittivity:.3f})'


class TrajectoryConfig:
    frames: int
    stride: int
    seed: int
    warmup: int
    sources: List[SourceSpec]
    obstacles: List[ObstacleSpec]
    random_sources: int
    wavelength: float
    amplitude_range: Tuple[float, float]
    # obstacle layout number, 0 for free space
    layout: int

    def __init__(self, frames: int = 12, stride: int = 25, seed: int = 0, sources: Sequence[SourceSpec] = (),
                 obstacles: Sequence[ObstacleSpec] = (), warmup: int = 0, random_sources: int = 0,
                 wavelength: float = DEFAULT_WAVELENGTH, amplitude_range: Tuple[float, float] = (0.5, 1.0),
                 layout: int = 0):
        self.frames = frames
        self.stride = stride
        self.seed = seed
        self.warmup = warmup
        self.sources = list(sources)
        self.obstacles = list(obstacles)
        self.random_sources = random_sources
        self.wavelength = wavelength
        self.amplitude_range = tuple(amplitude_range)
        self.layout = layout

    def validate(self, grid: GridSpec):
        if self.frames < 3:
            raise ConfigurationError('trajectory.frames', f'need 2 inputs and at least 1 target, got {self.frames}')
        if self.stride < 1:
            raise ConfigurationError('trajectory.stride', f'must be at least 1, got {self.stride}')
        if self.warmup < 0:
            raise ConfigurationError('trajectory.warmup', f'must not be negative, got {self.warmup}')
        if self.random_sources < 0:
            raise ConfigurationError('trajectory.sources', f'must not be negative, got {self.random_sources}')
        lo, hi = self.amplitude_range
        if not 0 <= lo <= hi:
            raise ConfigurationError('trajectory.amplitude', f'invalid range {self.amplitude_range}')
        for source in self.sources:
            source.validate(grid)
        for obstacle in self.obstacles:
            obstacle.validate(grid)
        return self

    def resolved_sources(self, grid: GridSpec) -> List[SourceSpec]:
        """Explicit sources followed by the seeded random ones."""
        if not self.random_sources:
            return list(self.sources)
        rng = np.random.default_rng(self.seed)
        return list(self.sources) + random_sources(rng, grid, self.random_sources, self.wavelength, self.amplitude_range)


def random_sources(rng: np.random.Generator, grid: GridSpec, count: int, wavelength: float = DEFAULT_WAVELENGTH,
                   amplitude_range: Tuple[float, float] = (0.5, 1.0)) -> List[SourceSpec]:
    """Point sources with uniform positions, phases in [0, 2 pi) and amplitudes in `amplitude_range`.

    In 3D, `count` sources are placed on each of the xy, yz and xz mid-planes.
    """
    lo, hi = amplitude_range
    sources = []
    if grid.spatial_dim == 2:
        for _ in range(count):
            position = tuple(int(rng.integers(0, d)) for d in grid.dims)
            sources.append(SourceSpec(position, wavelength, float(rng.uniform(lo, hi)), float(rng.uniform(0, 2 * math.pi))))
        return sources
    for plane in ('xy', 'yz', 'xz'):
        normal = PLANE_NORMAL_AXIS[plane]
        for _ in range(count):
            position = [int(rng.integers(0, d)) for d in grid.dims]
            position[normal] = grid.dims[normal] // 2
            sources.append(SourceSpec(position, wavelength, float(rng.uniform(lo, hi)),
                                      float(rng.uniform(0, 2 * math.pi)), plane=plane))
    return sources
