import logging
from typing import List, Sequence, Tuple

import numpy as np

from stapde.algebra import algebra_name
from stapde.dataset.embedding import extract
from stapde.dataset.windows import RolloutSequence, Sample, stack_frames
from stapde.exceptions import NumericalBlowupError, UsageError
from stapde.fdtd.fields import FieldFrame, Trajectory
from stapde.harness.metrics import MetricsRecord
from stapde.models.resnet import Model

log = logging.getLogger(__name__)


def predict_frame(model: Model, frames: Sequence[np.ndarray], step: int = 1) -> FieldFrame:
    """One forward pass on two component arrays; the batch always holds exactly one sample."""
    x = stack_frames(frames, model.signature, model.dtype)
    out = model.forward(x).data[0, 0]
    if not np.all(np.isfinite(out)):
        raise NumericalBlowupError('prediction', step, model.config.name)
    return extract(out, model.signature)


def _record(model: Model, pred: FieldFrame, gt: FieldFrame, trajectory: Trajectory, split: str, m: int) -> MetricsRecord:
    return MetricsRecord.measure(pred, gt, model.config.name, algebra_name(model.signature), trajectory.stride, split, m,
                                 trajectory.layout, model.param_count())


def evaluate(model: Model, samples: Sequence[Sample], split: str = 'test') -> List[MetricsRecord]:
    """Single-step metrics for every sample."""
    records = []
    for sample in samples:
        pred = predict_frame(model, list(sample.inputs))
        records.append(_record(model, pred, FieldFrame(sample.target), sample.trajectory, split, 1))
    return records


def rollout(model: Model, sequence: RolloutSequence, m: int = None,
            split: str = 'test') -> Tuple[List[FieldFrame], List[MetricsRecord]]:
    """Autoregressive prediction: step 1 sees two ground-truth frames, later steps see earlier predictions."""
    m = sequence.m if m is None else m
    if not 1 <= m <= sequence.m:
        raise UsageError('rollout', f'm={m} outside 1..{sequence.m}')
    window = list(sequence.initial)
    predictions, records = [], []
    for step in range(1, m + 1):
        pred = predict_frame(model, window, step)
        predictions.append(pred)
        records.append(_record(model, pred, sequence.truth(step), sequence.trajectory, split, step))
        window = [window[1], pred.components]
    return predictions, records


def teacher_forced_rollout(model: Model, sequence: RolloutSequence, m: int = None,
                           split: str = 'test') -> Tuple[List[FieldFrame], List[MetricsRecord]]:
    """Rollout in which ground truth replaces every prediction before it is fed back."""
    m = sequence.m if m is None else m
    if not 1 <= m <= sequence.m:
        raise UsageError('rollout', f'm={m} outside 1..{sequence.m}')
    predictions, records = [], []
    for step in range(1, m + 1):
        sample = sequence.sample(step)
        pred = predict_frame(model, list(sample.inputs), step)
        predictions.append(pred)
        records.append(_record(model, pred, sequence.truth(step), sequence.trajectory, split, step))
    return predictions, records
