from typing import List
from unittest import TestCase

import numpy as np

from stapde.fdtd import GridSpec, SimState, SourceSpec, step

WAVELENGTH_CELLS = 20


class TestBase(TestCase):

    def point_source(self, grid: GridSpec, position, amplitude=1.0, phase=0.0, plane=None, cutoff_step=None):
        return SourceSpec(position, wavelength=WAVELENGTH_CELLS * grid.dx, amplitude=amplitude, phase=phase,
                          plane=plane, cutoff_step=cutoff_step)

    def run_state(self, grid: GridSpec, sources=(), obstacles=(), steps=0) -> SimState:
        state = SimState(grid, sources, obstacles)
        for _ in range(steps):
            step(state)
        return state

    @staticmethod
    def zero_crossings(values: np.ndarray, start: int, stop: int) -> List[float]:
        """Linearly interpolated sign changes of values[start:stop], in sample coordinates."""
        crossings = []
        for i in range(start, stop - 1):
            a, b = values[i], values[i + 1]
            if a == 0.0:
                crossings.append(float(i))
            elif a * b < 0:
                crossings.append(i + a / (a - b))
        return crossings

    def mean_spacing(self, values: np.ndarray, start: int, stop: int) -> float:
        crossings = self.zero_crossings(values, start, stop)
        self.assertGreaterEqual(len(crossings), 3, f'too few zero crossings in [{start}, {stop})')
        return (crossings[-1] - crossings[0]) / (len(crossings) - 1)
