import csv
import logging
import math
import time
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from babel.dates import format_timedelta

from stapde.dataset.embedding import field_mask
from stapde.dataset.windows import Sample, batches, stack_samples
from stapde.exceptions import ConfigurationError, NumericalBlowupError, UsageError
from stapde.models.resnet import Model, save_checkpoint
from stapde.mvtensor import AdamState, Tape, adam_step, mse_loss

log = logging.getLogger(__name__)

CHECKPOINT_NAME = 'best.ckpt'
LOSS_CURVE_NAME = 'loss_curve.csv'


class TrainConfig:
    epochs: int
    batch_size: int
    lr: float
    seed: int

    def __init__(self, epochs: int = 50, batch_size: int = 32, lr: float = 1e-3, seed: int = 0):
        self.epochs = epochs
        self.batch_size = batch_size
        self.lr = lr
        self.seed = seed

    def validate(self):
        if self.epochs < 1:
            raise ConfigurationError('train.epochs', f'at least one epoch is needed, got {self.epochs}')
        if self.batch_size < 1:
            raise ConfigurationError('train.batch_size', f'must be positive, got {self.batch_size}')
        if self.lr < 0 or not math.isfinite(self.lr):
            raise ConfigurationError('train.lr', f'must be a finite non-negative number, got {self.lr}')
        return self


class EpochRecord:
    epoch: int
    train_mse: float
    val_mse: float

    def __init__(self, epoch: int, train_mse: float, val_mse: float):
        self.epoch = epoch
        self.train_mse = train_mse
        self.val_mse = val_mse

    def __repr__(self):
        return f'EpochRecord({self.epoch}, train={self.train_mse:.4e}, val={self.val_mse:.4e})'


class TrainResult:
    curve: List[EpochRecord]
    best_epoch: int
    best_val: float
    checkpoint: Optional[Path]
    checkpoints_written: int

    def __init__(self):
        self.curve = []
        self.best_epoch = 0
        self.best_val = math.inf
        self.checkpoint = None
        self.checkpoints_written = 0


def write_loss_curve(path: Path, curve: Sequence[EpochRecord]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(('epoch', 'train_mse', 'val_mse'))
        for record in curve:
            writer.writerow((record.epoch, repr(record.train_mse), repr(record.val_mse)))


def read_loss_curve(path: Path) -> List[EpochRecord]:
    path = Path(path)
    if not path.exists():
        raise UsageError('read_loss_curve', f'no loss curve at {path}')
    with path.open(newline='') as f:
        return [EpochRecord(int(row['epoch']), float(row['train_mse']), float(row['val_mse']))
                for row in csv.DictReader(f)]


class Trainer:
    """Adam on the masked field MSE; keeps the checkpoint with the lowest validation loss."""

    def __init__(self, model: Model, config: TrainConfig,
                 on_epoch: Callable[[EpochRecord], None] = None):
        self.model = model
        self.config = config.validate()
        self.mask = field_mask(model.signature)
        self.on_epoch = on_epoch
        self.state = AdamState(model.parameters(), lr=config.lr)

    def train_step(self, batch: Sequence[Sample], epoch: int, index: int) -> float:
        x, y = stack_samples(batch, self.model.signature, self.model.dtype)
        self.model.zero_grad()
        tape = Tape()
        loss = mse_loss(self.model(x, tape), y, self.mask, tape=tape)
        value = loss.item()
        if not math.isfinite(value):
            raise NumericalBlowupError('train', index, f'epoch {epoch}, batch {index}')
        tape.backward(loss)
        params = self.model.parameters()
        adam_step(params, [p.grad for p in params], self.state)
        log.debug(f'epoch {epoch} batch {index}: loss {value:.6e}')
        return value

    def validation_loss(self, samples: Sequence[Sample], epoch: int) -> float:
        total = 0.0
        for index in range(0, len(samples), self.config.batch_size):
            batch = samples[index:index + self.config.batch_size]
            x, y = stack_samples(batch, self.model.signature, self.model.dtype)
            value = mse_loss(self.model(x), y, self.mask).item()
            if not math.isfinite(value):
                raise NumericalBlowupError('validation', index, f'epoch {epoch}')
            total += value * len(batch)
        return total / len(samples)

    def train(self, train_samples: Sequence[Sample], val_samples: Sequence[Sample], out_dir: Path = None) -> TrainResult:
        if not train_samples:
            raise UsageError('train', 'the training split holds no samples')
        if not val_samples:
            raise UsageError('train', 'the validation split holds no samples')
        result = TrainResult()
        started = time.monotonic()
        for epoch in range(1, self.config.epochs + 1):
            total = 0.0
            for index, batch in enumerate(batches(train_samples, self.config.batch_size, self.config.seed, epoch)):
                total += self.train_step(batch, epoch, index) * len(batch)
            record = EpochRecord(epoch, total / len(train_samples), self.validation_loss(val_samples, epoch))
            result.curve.append(record)
            log.info(f'epoch {epoch}/{self.config.epochs}: train MSE {record.train_mse:.4e}, val MSE {record.val_mse:.4e}')

            if record.val_mse < result.best_val:
                result.best_epoch = epoch
                result.best_val = record.val_mse
                if out_dir is not None:
                    result.checkpoint = Path(out_dir) / CHECKPOINT_NAME
                    save_checkpoint(result.checkpoint, self.model)
                    result.checkpoints_written += 1
                    log.info(f'new best validation MSE at epoch {epoch}, saved {result.checkpoint}')
            if self.on_epoch is not None:
                self.on_epoch(record)

        if out_dir is not None:
            write_loss_curve(Path(out_dir) / LOSS_CURVE_NAME, result.curve)
        elapsed = format_timedelta(time.monotonic() - started, granularity='millisecond', locale='en_US')
        log.info(f'training {self.model.config.name} finished in {elapsed}: best epoch {result.best_epoch}, '
                 f'val MSE {result.best_val:.4e}')
        return result

