from typing import Dict, Iterable, List, Sequence

from babel.dates import format_timedelta
from tabulate import tabulate

from stapde.harness.metrics import MetricsRecord
from stapde.harness.selftest import CheckResult
from stapde.harness.trainer import EpochRecord

GRID_FMT = 'fancy_grid'


class StapdeFormatter:

    @staticmethod
    def format_elapsed(seconds: float) -> str:
        return format_timedelta(seconds, granularity='millisecond', locale='en_US')

    @staticmethod
    def format_split_counts(files: Dict[str, List[str]], frames: Dict[str, int], prepend_with_newline=True) -> str:
        headers = ['Split', 'Trajectories', 'Frames']
        rows = [[split, len(files.get(split, [])), frames.get(split, 0)] for split in files]
        rows.append(['total', sum(len(f) for f in files.values()), sum(frames.values())])
        prefix = '\n' if prepend_with_newline else ''
        return prefix + tabulate(rows, headers=headers, tablefmt=GRID_FMT) + '\n'

    @staticmethod
    def format_model_summary(name: str, algebra: str, channels: int, blocks: int, parameters: int) -> str:
        headers = ['Model', 'Algebra', 'Channels', 'Blocks', 'Parameters']
        return tabulate([[name, algebra, channels, blocks, f'{parameters:,}']], headers=headers, tablefmt=GRID_FMT)

    @staticmethod
    def format_channel_sweep(counts: Dict[str, Dict[int, int]]) -> str:
        widths = sorted({c for per_model in counts.values() for c in per_model})
        headers = ['Channels'] + list(counts)
        rows = [[c] + [f'{counts[name][c]:,}' if c in counts[name] else '' for name in counts] for c in widths]
        return tabulate(rows, headers=headers, tablefmt=GRID_FMT)

    @staticmethod
    def format_loss_curve(curve: Sequence[EpochRecord]) -> str:
        rows = [[r.epoch, f'{r.train_mse:.4e}', f'{r.val_mse:.4e}'] for r in curve]
        return tabulate(rows, headers=['Epoch', 'Train MSE', 'Val MSE'], tablefmt=GRID_FMT)

    @staticmethod
    def format_metrics(records: Iterable[MetricsRecord]) -> str:
        headers = ['Model', 'Params', 'Stride', 'Split', 'Layout', 'm', 'MSE', 'Corr', 'SSIM']
        rows = [[r.model, f'{r.parameters:,}', r.stride, r.split, 'all' if r.layout is None else r.layout, r.rollout_m,
                 f'{r.mse:.4e}', f'{r.corr:.4e}', f'{r.ssim:.4f}'] for r in records]
        return tabulate(rows, headers=headers, tablefmt=GRID_FMT)

    @staticmethod
    def format_selftest(results: Iterable[CheckResult]) -> str:
        rows = [[r.name, 'pass' if r.passed else 'FAIL', r.detail] for r in results]
        return tabulate(rows, headers=['Check', 'Result', 'Detail'], tablefmt=GRID_FMT)
