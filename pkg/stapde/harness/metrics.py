import csv
from pathlib import Path
from typing import Iterable, List, Optional

import numpy as np
from skimage.metrics import structural_similarity

from stapde.exceptions import UsageError
from stapde.fdtd.fields import FieldFrame

SSIM_WINDOW = 7
SSIM_K1 = 0.01
SSIM_K2 = 0.03
CSV_HEADER = ('model', 'algebra', 'dt_stride', 'split', 'rollout_m', 'mse', 'corr', 'ssim', 'layout', 'parameters')


def _check(pred: FieldFrame, gt: FieldFrame, operation: str):
    if pred.components.shape != gt.components.shape:
        raise UsageError(operation, f'prediction {pred.components.shape} and ground truth {gt.components.shape} differ')


def metric_mse(pred: FieldFrame, gt: FieldFrame) -> float:
    """Squared component differences summed over components, averaged over the grid."""
    _check(pred, gt, 'metric_mse')
    diff = pred.components.astype(np.float64) - gt.components.astype(np.float64)
    return float(np.sum(diff * diff) / np.prod(gt.grid_shape))


def metric_correlation(pred: FieldFrame, gt: FieldFrame) -> float:
    """Grid mean of the componentwise dot product of the two field vectors; not normalized."""
    _check(pred, gt, 'metric_correlation')
    products = pred.components.astype(np.float64) * gt.components.astype(np.float64)
    return float(np.sum(products) / np.prod(gt.grid_shape))


def _window(shape) -> int:
    size = min(SSIM_WINDOW, min(shape))
    return size if size % 2 == 1 else size - 1


def component_ssim(pred: np.ndarray, gt: np.ndarray) -> float:
    pred = pred.astype(np.float64)
    gt = gt.astype(np.float64)
    data_range = float(gt.max() - gt.min())
    if data_range == 0.0:
        if np.array_equal(pred, gt):
            return 1.0
        data_range = 1.0
    return float(structural_similarity(gt, pred, win_size=_window(gt.shape), data_range=data_range, K1=SSIM_K1,
                                       K2=SSIM_K2, gaussian_weights=False, use_sample_covariance=False))


def metric_ssim(pred: FieldFrame, gt: FieldFrame) -> float:
    """SSIM per component with a uniform window, averaged over components."""
    _check(pred, gt, 'metric_ssim')
    return float(np.mean([component_ssim(p, g) for p, g in zip(pred.components, gt.components)]))


class MetricsRecord:
    model: str
    algebra: str
    stride: int
    split: str
    rollout_m: int
    mse: float
    corr: float
    ssim: float
    # obstacle layout of the source trajectory; None on rows averaged over layouts
    layout: Optional[int]
    parameters: int

    def __init__(self, model: str, algebra: str, stride: int, split: str, rollout_m: int, mse: float, corr: float,
                 ssim: float, layout: Optional[int] = 0, parameters: int = 0):
        self.model = model
        self.algebra = algebra
        self.stride = stride
        self.split = split
        self.rollout_m = rollout_m
        self.mse = mse
        self.corr = corr
        self.ssim = ssim
        self.layout = layout
        self.parameters = parameters

    @staticmethod
    def measure(pred: FieldFrame, gt: FieldFrame, model: str, algebra: str, stride: int, split: str,
                rollout_m: int, layout: int = 0, parameters: int = 0) -> 'MetricsRecord':
        return MetricsRecord(model, algebra, stride, split, rollout_m, metric_mse(pred, gt),
                             metric_correlation(pred, gt), metric_ssim(pred, gt), layout, parameters)

    def as_row(self):
        return (self.model, self.algebra, self.stride, self.split, self.rollout_m,
                repr(self.mse), repr(self.corr), repr(self.ssim), '' if self.layout is None else self.layout,
                self.parameters)

    def __repr__(self):
        return f'MetricsRecord({self.model}, {self.split}, m={self.rollout_m}, mse={self.mse:.3e})'


def write_metrics_csv(path: Path, records: Iterable[MetricsRecord]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(record.as_row())


def read_metrics_csv(path: Path) -> List[MetricsRecord]:
    path = Path(path)
    if not path.exists():
        raise UsageError('read_metrics', f'no metrics file at {path}')
    with path.open(newline='') as f:
        return [MetricsRecord(row['model'], row['algebra'], int(row['dt_stride']), row['split'], int(row['rollout_m']),
                              float(row['mse']), float(row['corr']), float(row['ssim']),
                              _optional_int(row.get('layout', '0')), int(row.get('parameters') or 0))
                for row in csv.DictReader(f)]


def _optional_int(value: Optional[str]) -> Optional[int]:
    return int(value) if value else None


def summarize(records: Iterable[MetricsRecord], by_layout: bool = False) -> List[MetricsRecord]:
    """Mean record per (model, split, rollout_m), and per obstacle layout with `by_layout`, in first-seen order."""
    groups = {}
    for record in records:
        key = (record.model, record.algebra, record.stride, record.split, record.rollout_m,
               record.layout if by_layout else None, record.parameters)
        groups.setdefault(key, []).append(record)
    return [MetricsRecord(*key[:5], float(np.mean([r.mse for r in group])), float(np.mean([r.corr for r in group])),
                          float(np.mean([r.ssim for r in group])), layout=key[5], parameters=key[6])
            for key, group in groups.items()]
