import logging
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np

from stapde.exceptions import NumericalBlowupError, UsageError
from stapde.fdtd.grid import PLANE_COMPONENTS, GridSpec, ObstacleSpec, SourceSpec

log = logging.getLogger(__name__)

PML_ORDER = 3
PML_REFLECTION = 1e-6

COMPONENTS_2D = ('Ex', 'Ey', 'Bz')
COMPONENTS_3D = ('Ex', 'Ey', 'Ez', 'Bx', 'By', 'Bz')

# staggered position of each component inside its cell, in cell units
OFFSETS_2D = {'Ex': (.5, 0.), 'Ey': (0., .5), 'Bz': (.5, .5)}
OFFSETS_3D = {
    'Ex': (.5, 0., 0.), 'Ey': (0., .5, 0.), 'Ez': (0., 0., .5),
    'Bx': (0., .5, .5), 'By': (.5, 0., .5), 'Bz': (.5, .5, 0.),
}

# curl terms as (derivative axis, source field, sign); one split part per term
B_TERMS_2D = {'Bz': ((0, 'Ey', -1), (1, 'Ex', +1))}
E_TERMS_2D = {'Ex': ((1, 'Bz', +1),), 'Ey': ((0, 'Bz', -1),)}
B_TERMS_3D = {
    'Bx': ((1, 'Ez', -1), (2, 'Ey', +1)),
    'By': ((2, 'Ex', -1), (0, 'Ez', +1)),
    'Bz': ((0, 'Ey', -1), (1, 'Ex', +1)),
}
E_TERMS_3D = {
    'Ex': ((1, 'Bz', +1), (2, 'By', -1)),
    'Ey': ((2, 'Bx', +1), (0, 'Bz', -1)),
    'Ez': ((0, 'By', +1), (1, 'Bx', -1)),
}


def components(spatial_dim: int) -> Tuple[str, ...]:
    return COMPONENTS_2D if spatial_dim == 2 else COMPONENTS_3D


def offsets(spatial_dim: int) -> Dict[str, Tuple[float, ...]]:
    return OFFSETS_2D if spatial_dim == 2 else OFFSETS_3D


def pml_profile(grid: GridSpec, axis: int, offset: float) -> np.ndarray:
    """Graded conductivity sigma_max * depth^3 along one axis of the padded array."""
    p = grid.pml_cells
    n = grid.total_dims[axis]
    if p == 0:
        return np.zeros(n)
    x = np.arange(n) + offset
    inner_hi = p + grid.dims[axis]
    depth = np.maximum(np.maximum(p - x, x - inner_hi), 0.0) / p
    sigma_max = (PML_ORDER + 1) * math.log(1.0 / PML_REFLECTION) / (2.0 * p)
    return sigma_max * depth ** PML_ORDER


def _along(profile: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = profile.size
    return profile.reshape(shape)


def forward_difference(f: np.ndarray, axis: int) -> np.ndarray:
    """f[i+1] - f[i], with zero beyond the last sample."""
    return np.diff(f, axis=axis, append=0.0)


def backward_difference(f: np.ndarray, axis: int) -> np.ndarray:
    """f[i] - f[i-1], with zero before the first sample."""
    return np.diff(f, axis=axis, prepend=0.0)


class SimState:
    """Yee arrays over the PML-padded grid.

    Each component is one leapfrog array. Inside the PML it is additionally carried as one split part
    per curl term, each damped by the conductivity along its own derivative axis, and the array there
    is the sum of its parts. Parts are not read outside `damped` cells.
    """
    grid: GridSpec
    dt: float
    step: int
    sources: List[SourceSpec]
    fields: Dict[str, np.ndarray]
    parts: Dict[str, List[np.ndarray]]
    damped: Dict[str, np.ndarray]
    permittivity: Dict[str, np.ndarray]
    coefficients: Dict[str, List[Tuple[np.ndarray, np.ndarray]]]

    def __init__(self, grid: GridSpec, sources: Sequence[SourceSpec] = (), obstacles: Sequence[ObstacleSpec] = ()):
        grid.validate()
        for source in sources:
            source.validate(grid)
        for obstacle in obstacles:
            obstacle.validate(grid)
        self.grid = grid
        self.dt = grid.dt
        self.step = 0
        self.sources = list(sources)
        shape = grid.total_dims
        terms = self.terms()
        self.fields = {name: np.zeros(shape) for name in components(grid.spatial_dim)}
        self.parts = {name: [np.zeros(shape) for _ in terms[name]] for name in components(grid.spatial_dim)}
        self.damped = {}
        self.permittivity = {name: self._permittivity(name, obstacles) for name in self.e_terms()}
        self.coefficients = {}
        for name, component_terms in terms.items():
            coefficients = []
            damped = np.zeros(shape, dtype=bool)
            for axis, _, _ in component_terms:
                sigma = _along(pml_profile(grid, axis, offsets(grid.spatial_dim)[name][axis]), axis, len(shape))
                damped |= sigma > 0
                half = sigma * self.dt / 2.0
                ca = (1.0 - half) / (1.0 + half)
                cb = self.dt / (1.0 + half)
                if name in self.permittivity:
                    cb = cb / self.permittivity[name]
                coefficients.append((ca, cb))
            self.coefficients[name] = coefficients
            self.damped[name] = damped

    @property
    def spatial_dim(self) -> int:
        return self.grid.spatial_dim

    @property
    def time(self) -> float:
        return self.step * self.dt

    def b_terms(self):
        return B_TERMS_2D if self.spatial_dim == 2 else B_TERMS_3D

    def e_terms(self):
        return E_TERMS_2D if self.spatial_dim == 2 else E_TERMS_3D

    def terms(self):
        return {**self.e_terms(), **self.b_terms()}

    def field(self, name: str) -> np.ndarray:
        return self.fields[name]

    def set_field(self, name: str, values: np.ndarray):
        """Replaces a component; inside the PML the whole value goes into the first split part."""
        self.fields[name][...] = values
        parts = self.parts[name]
        parts[0][...] = values
        for part in parts[1:]:
            part[...] = 0.0

    def add_to_field(self, name: str, index: Tuple[int, ...], value: float):
        self.fields[name][index] += value
        parts = self.parts[name]
        share = value / len(parts)
        for part in parts:
            part[index] += share

    def _permittivity(self, name: str, obstacles: Sequence[ObstacleSpec]) -> np.ndarray:
        grid = self.grid
        eps = np.ones(grid.total_dims)
        offset = offsets(grid.spatial_dim)[name]
        for obstacle in obstacles:
            mask = np.ones(grid.total_dims, dtype=bool)
            for axis in range(grid.spatial_dim):
                coord = np.arange(grid.total_dims[axis]) - grid.pml_cells + offset[axis]
                inside = (coord >= obstacle.lo[axis]) & (coord < obstacle.hi[axis])
                mask &= _along(inside, axis, grid.spatial_dim)
            eps[mask] = obstacle.rel_permittivity
        return eps


def _update(state: SimState, terms, difference):
    """Advances the components in `terms` from the curl of the other kind of field."""
    for name, component_terms in terms.items():
        field = state.fields[name]
        damped = state.damped[name]
        split = np.zeros_like(field) if damped.any() else None
        for part, (axis, source, sign), (ca, cb) in zip(state.parts[name], component_terms, state.coefficients[name]):
            delta = (sign * cb) * difference(state.fields[source], axis)
            field += delta
            if split is not None:
                part *= ca
                part += delta
                split += part
        if split is not None:
            field[damped] = split[damped]


def source_component(state: SimState, source: SourceSpec) -> str:
    if state.spatial_dim == 2:
        return 'Bz'
    return PLANE_COMPONENTS[source.plane]


def source_value(source: SourceSpec, grid: GridSpec, t: float) -> float:
    return source.amplitude * math.sin(2.0 * math.pi * t / grid.cells(source.wavelength) + source.phase)


def inject_sources(state: SimState, t: float):
    """Adds every active source's sample at time t to its driven component."""
    p = state.grid.pml_cells
    for source in state.sources:
        if source.cutoff_step is not None and state.step > source.cutoff_step:
            continue
        index = tuple(c + p for c in source.position)
        state.add_to_field(source_component(state, source), index, source_value(source, state.grid, t))


def step(state: SimState):
    """One leapfrog update: B from curl E, then E from curl B / eps, then sources."""
    _update(state, state.b_terms(), forward_difference)
    _update(state, state.e_terms(), backward_difference)
    state.step += 1
    inject_sources(state, state.time)
    total = sum(float(np.sum(field)) for field in state.fields.values())
    if not math.isfinite(total):
        raise NumericalBlowupError('fdtd.step', state.step)


def discrete_div_b(state: SimState) -> np.ndarray:
    """Divergence of B at cell centres of the physical region.

    Each cell uses the six face values B[i+1] - B[i] along each axis, so the result covers `dims`
    cells when a PML surrounds the region and `dims - 1` cells against bare walls.
    """
    if state.spatial_dim != 3:
        raise UsageError('discrete_div_b', 'divergence of B is only defined for 3D states')
    p = state.grid.pml_cells
    stop = [min(p + d, t - 1) for d, t in zip(state.grid.dims, state.grid.total_dims)]
    cells = tuple(slice(p, s) for s in stop)
    div = np.zeros(tuple(s - p for s in stop))
    for axis, name in enumerate(('Bx', 'By', 'Bz')):
        b = state.field(name)
        shifted = list(cells)
        shifted[axis] = slice(p + 1, stop[axis] + 1)
        div += b[tuple(shifted)] - b[cells]
    return div


def field_energy(state: SimState) -> float:
    """0.5 * sum(eps E^2 + B^2) over the padded grid."""
    energy = 0.0
    for name in components(state.spatial_dim):
        f = state.field(name)
        weight = state.permittivity.get(name, 1.0)
        energy += 0.5 * float(np.sum(weight * f * f))
    return energy


def colocate(state: SimState) -> np.ndarray:
    """All components averaged onto cell centres of the physical region: (components, *dims)."""
    grid = state.grid
    p = grid.pml_cells
    out = np.empty((len(components(grid.spatial_dim)),) + grid.dims)
    for c, name in enumerate(components(grid.spatial_dim)):
        f = np.pad(state.field(name), [(0, 1)] * grid.spatial_dim)
        for axis, offset in enumerate(offsets(grid.spatial_dim)[name]):
            if offset == 0.0:
                f = 0.5 * (f + np.roll(f, -1, axis=axis))
        out[c] = f[tuple(slice(p, p + d) for d in grid.dims)]
    return out
