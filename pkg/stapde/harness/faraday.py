import logging
from pathlib import Path
from typing import List, Tuple

import numpy as np

from stapde.algebra import Signature, gp_array
from stapde.dataset.embedding import embed, field_mask
from stapde.exceptions import UsageError
from stapde.fdtd.fields import FieldFrame

log = logging.getLogger(__name__)

DIFF_CLIP = 0.02


class FaradayMap:
    """Per-cell square of the field multivector: scalar part, and in 3D the pseudoscalar part."""
    scalar: np.ndarray
    pseudoscalar: np.ndarray

    def __init__(self, scalar: np.ndarray, pseudoscalar: np.ndarray = None):
        self.scalar = scalar
        self.pseudoscalar = pseudoscalar

    def parts(self) -> List[Tuple[str, np.ndarray]]:
        parts = [('scalar', self.scalar)]
        if self.pseudoscalar is not None:
            parts.append(('pseudoscalar', self.pseudoscalar))
        return parts


def faraday_map(frame: FieldFrame, sig: Signature) -> FaradayMap:
    if len(field_mask(sig)) != frame.components.shape[0]:
        raise UsageError('faraday_map', f'{frame.spatial_dim}D frame does not belong to {sig.name}')
    mv = embed(frame, sig, np.float64)
    squared = gp_array(mv, mv, sig)
    if frame.spatial_dim == 2:
        return FaradayMap(squared[..., 0])
    return FaradayMap(squared[..., 0], squared[..., sig.pseudoscalar_index])


def difference_map(truth: np.ndarray, predicted: np.ndarray, clip: float = DIFF_CLIP) -> np.ndarray:
    return np.clip(np.abs(truth - predicted), 0.0, clip)


def grid_slices(grid: np.ndarray) -> List[Tuple[str, np.ndarray]]:
    """2D grids as they are; 3D grids as z slices at the bottom, middle and top."""
    if grid.ndim == 2:
        return [('', grid)]
    depth = grid.shape[2]
    return [(f'_z{z}', grid[:, :, z]) for z in sorted({0, depth // 2, depth - 1})]


def write_grid(path: Path, grid: np.ndarray) -> List[Path]:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for suffix, plane in grid_slices(grid):
        target = path.with_name(f'{path.stem}{suffix}{path.suffix}')
        np.savetxt(target, plane, fmt='%.9e')
        written.append(target)
    log.debug(f'wrote {len(written)} grid dump(s) for {path.name}')
    return written


def export_faraday(out_dir: Path, label: str, truth: FieldFrame, predicted: FieldFrame, sig: Signature) -> List[Path]:
    """Ground-truth, predicted and clipped difference F² grids for one frame."""
    truth_map = faraday_map(truth, sig)
    predicted_map = faraday_map(predicted, sig)
    written = []
    for (part, gt), (_, pred) in zip(truth_map.parts(), predicted_map.parts()):
        written += write_grid(Path(out_dir) / f'{label}_{part}_gt.txt', gt)
        written += write_grid(Path(out_dir) / f'{label}_{part}_pred.txt', pred)
        written += write_grid(Path(out_dir) / f'{label}_{part}_diff.txt', difference_map(gt, pred))
    return written
