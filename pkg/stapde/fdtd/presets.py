import configparser
from pathlib import Path
from typing import Iterator, List, Sequence

from stapde.exceptions import ConfigurationError
from stapde.fdtd.grid import GridSpec, ObstacleSpec

PRESET_FILE = Path(__file__).parent / 'obstacle_presets.ini'
# z extent for 2D layouts placed on 3D grids
EXTRUSION = (1 / 3, 2 / 3)


class ObstacleLayout:
    """One numbered obstacle configuration of a preset; 0 is reserved for free space."""
    layout_id: int
    boxes: List[ObstacleSpec]

    def __init__(self, layout_id: int, boxes: Sequence[ObstacleSpec]):
        self.layout_id = layout_id
        self.boxes = list(boxes)

    def __iter__(self) -> Iterator[ObstacleSpec]:
        return iter(self.boxes)

    def __len__(self):
        return len(self.boxes)

    def __repr__(self):
        return f'ObstacleLayout({self.layout_id}, {self.boxes})'


def _scale(fraction: float, cells: int) -> int:
    return min(max(int(round(fraction * cells)), 0), cells)


def _box(values: List[float], grid: GridSpec, eps: float) -> ObstacleSpec:
    d = grid.spatial_dim
    if len(values) == 4 and d == 3:
        values = values[:2] + [EXTRUSION[0]] + values[2:] + [EXTRUSION[1]]
    elif len(values) == 6:
        values = [values[0], values[1], values[4], values[2], values[3], values[5]]
    if len(values) != 2 * d:
        raise ConfigurationError('obstacles', f'layout {values} does not describe a {d}D box')
    lo = [_scale(f, n) for f, n in zip(values[:d], grid.dims)]
    hi = [max(_scale(f, n), l + 1) for f, n, l in zip(values[d:], grid.dims, lo)]
    return ObstacleSpec(lo, hi, eps).validate(grid)


def preset_names() -> List[str]:
    parser = configparser.ConfigParser()
    parser.read(PRESET_FILE)
    return parser.sections()


def obstacle_presets(name: str, grid: GridSpec, rel_permittivity: float = None) -> List[ObstacleLayout]:
    """Obstacle configurations of a named preset scaled to `grid`, numbered by their keys in the preset file."""
    parser = configparser.ConfigParser()
    parser.read(PRESET_FILE)
    if not parser.has_section(name):
        raise ConfigurationError('trajectory.obstacles', f'unknown obstacle preset {name!r}, expected one of {parser.sections()}')
    section = parser[name]
    eps = rel_permittivity if rel_permittivity is not None else section.getfloat('rel_permittivity')
    layouts = []
    for key in sorted((k for k in section if k.isdigit()), key=int):
        values = [float(v) for v in section[key].split()]
        layouts.append(ObstacleLayout(int(key), [_box(values, grid, eps)]))
    return layouts
