from typing import Iterator, List, Sequence, Tuple

import numpy as np

from stapde.algebra import Signature
from stapde.dataset.embedding import embed_components
from stapde.exceptions import UsageError
from stapde.fdtd.fields import FieldFrame, Trajectory
from stapde.mvtensor import DEFAULT_DTYPE, MvTensor

INPUT_FRAMES = 2
TRAIN = 'train'
ROLLOUT = 'rollout'


class Sample:
    """Two consecutive input frames and the following target frame of one trajectory."""
    trajectory: Trajectory
    start: int

    def __init__(self, trajectory: Trajectory, start: int):
        self.trajectory = trajectory
        self.start = start

    @property
    def frame_indices(self) -> Tuple[int, int, int]:
        return self.start, self.start + 1, self.start + 2

    @property
    def inputs(self) -> np.ndarray:
        return self.trajectory.data[self.start:self.start + INPUT_FRAMES]

    @property
    def target(self) -> np.ndarray:
        return self.trajectory.data[self.start + INPUT_FRAMES]

    def __repr__(self):
        return f'Sample({self.trajectory.path}, frames={self.frame_indices})'


class RolloutSequence:
    """First two frames of a trajectory plus `m` ground-truth continuation frames."""
    trajectory: Trajectory
    m: int

    def __init__(self, trajectory: Trajectory, m: int):
        self.trajectory = trajectory
        self.m = m

    @property
    def initial(self) -> np.ndarray:
        return self.trajectory.data[:INPUT_FRAMES]

    def truth(self, step: int) -> FieldFrame:
        """Ground truth for rollout step 1..m."""
        return self.trajectory.frame(INPUT_FRAMES + step - 1)

    def sample(self, step: int) -> Sample:
        """Single-step sample whose target is rollout step `step`."""
        return Sample(self.trajectory, step - 1)

    def __repr__(self):
        return f'RolloutSequence({self.trajectory.path}, m={self.m})'


def window(trajectory: Trajectory, mode: str = TRAIN, m: int = 1):
    if mode == TRAIN:
        if trajectory.frames < INPUT_FRAMES + 1:
            raise UsageError('window', f'{trajectory.frames} frames cannot form a training sample')
        return [Sample(trajectory, i) for i in range(trajectory.frames - INPUT_FRAMES)]
    if mode == ROLLOUT:
        if m < 1 or trajectory.frames < INPUT_FRAMES + m:
            raise UsageError('window', f'rollout of m={m} needs {INPUT_FRAMES + m} frames, trajectory has {trajectory.frames}')
        return [RolloutSequence(trajectory, m)]
    raise UsageError('window', f'unknown mode {mode!r}')


def batches(samples: Sequence[Sample], batch_size: int, seed: int, epoch: int = 0) -> Iterator[List[Sample]]:
    """Seeded shuffle per (seed, epoch); the last partial batch is kept."""
    if batch_size < 1:
        raise UsageError('batches', f'batch size must be positive, got {batch_size}')
    order = np.random.default_rng([seed, epoch]).permutation(len(samples))
    for begin in range(0, len(order), batch_size):
        yield [samples[i] for i in order[begin:begin + batch_size]]


def stack_samples(samples: Sequence[Sample], sig: Signature, dtype=DEFAULT_DTYPE) -> Tuple[MvTensor, MvTensor]:
    """Network input (B, 2, *grid, blades) and target (B, 1, *grid, blades)."""
    inputs = np.stack([np.stack([embed_components(f, sig, dtype) for f in s.inputs]) for s in samples])
    targets = np.stack([embed_components(s.target, sig, dtype)[np.newaxis] for s in samples])
    return MvTensor(sig, inputs), MvTensor(sig, targets)


def stack_frames(frames: Sequence[np.ndarray], sig: Signature, dtype=DEFAULT_DTYPE) -> MvTensor:
    """Single network input (1, len(frames), *grid, blades) from component arrays."""
    return MvTensor(sig, np.stack([embed_components(f, sig, dtype) for f in frames])[np.newaxis])
