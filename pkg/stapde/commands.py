import logging
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from stapde.ExperimentStore import ExperimentStore
from stapde.algebra import algebra_name
from stapde.dataset import ROLLOUT, SPLITS, SplitManifest, window
from stapde.experimentOptions import ExperimentOptions
from stapde.exceptions import UsageError
from stapde.fdtd import Trajectory, generate_dataset, layout_ids, obstacle_presets, read_trajectory, write_trajectory
from stapde.formatter import StapdeFormatter
from stapde.harness import (CHECKPOINT_NAME, LOSS_CURVE_NAME, MetricsRecord, TrainConfig, Trainer, evaluate,
                            export_faraday, read_loss_curve, read_metrics_csv, rollout, run_selftest, summarize,
                            teacher_forced_rollout, write_loss_curve, write_metrics_csv)
from stapde.models import Model, build, channel_sweep, load_checkpoint
from stapde.models.config import ModelConfig
from stapde.mvtensor import DEFAULT_DTYPE, TEST_DTYPE

log = logging.getLogger(__name__)

METRICS_NAME = 'metrics.csv'
ROLLOUT_METRICS_NAME = 'rollout_metrics.csv'
EXPORT_DIR = 'export'
TEST_SPLITS = ('test', 'test_unseen')
SWEEP_CHANNELS = range(15, 41, 5)


def _eval_dtype(options: ExperimentOptions):
    return TEST_DTYPE if options.is_test_mode else DEFAULT_DTYPE


def _open_store(options: ExperimentOptions) -> ExperimentStore:
    store = ExperimentStore(options.is_test_mode, options.store_dir)
    store.initialize()
    return store


def _load_model(options: ExperimentOptions, cfg: ModelConfig) -> Model:
    return load_checkpoint(options.model_dir(cfg) / CHECKPOINT_NAME, dtype=_eval_dtype(options))


def cmd_gen(options: ExperimentOptions) -> int:
    """Simulates every split and writes the trajectories plus their manifest."""
    options.write_resolved()
    manifest = SplitManifest(options.data_dir)
    for stream, split in enumerate(SPLITS):
        count = options.split_counts[split]
        if count == 0:
            continue
        preset = options.unseen_obstacle_preset if split == 'test_unseen' else options.obstacle_preset
        layouts = obstacle_presets(preset, options.grid, options.rel_permittivity) if preset else None
        paths = generate_dataset(options.grid, options.trajectory, count, options.data_dir / split, split,
                                 options.seed, stream=stream, obstacle_layouts=layouts, workers=options.workers)
        for path, layout in zip(paths, layout_ids(count, layouts)):
            manifest.add(split, path, options.trajectory.frames, layout)
        log.info(f'{split}: {count} trajectories, {count * options.trajectory.frames} frames')
    manifest.save()
    print(StapdeFormatter.format_split_counts(manifest.files, manifest.frames))
    return 0


def cmd_train(options: ExperimentOptions) -> int:
    """Trains every configured model and keeps its best validation checkpoint."""
    options.write_resolved()
    manifest = SplitManifest.load(options.data_dir)
    train_samples = manifest.samples('train')
    val_samples = manifest.samples('val')
    stride = read_trajectory(manifest.paths('train')[0]).stride
    store = _open_store(options)
    log.info(f'{len(train_samples)} training and {len(val_samples)} validation samples')
    print(StapdeFormatter.format_channel_sweep(
        {cfg.name: channel_sweep(cfg.algebra, cfg.spatial_dim, SWEEP_CHANNELS, cfg.blocks, cfg.kernel)
         for cfg in options.models}))

    for cfg in options.models:
        model = build(cfg)
        print(StapdeFormatter.format_model_summary(cfg.name, algebra_name(cfg.algebra), cfg.channels, cfg.blocks,
                                                  model.param_count()))
        run_id = store.start_run(cfg.name, algebra_name(cfg.algebra), cfg.channels, cfg.seed, stride,
                                 model.param_count())
        train_cfg = TrainConfig(options.train.epochs, options.train.batch_size, options.train.lr, seed=cfg.seed)

        def record_epoch(record, run_id=run_id):
            store.add_epoch(run_id, record.epoch, record.train_mse, record.val_mse)

        result = Trainer(model, train_cfg, on_epoch=record_epoch).train(train_samples, val_samples,
                                                                        options.model_dir(cfg))
        store.finish_run(run_id, result.best_epoch, result.best_val, str(result.checkpoint))
        print(StapdeFormatter.format_loss_curve(result.curve))
    return 0


def _store_metrics(options: ExperimentOptions, cfg: ModelConfig, records: List[MetricsRecord]):
    store = _open_store(options)
    run = store.latest_run_for_checkpoint(str(options.model_dir(cfg) / CHECKPOINT_NAME))
    store.add_metrics(run.id if run is not None else None, records)


def cmd_eval(options: ExperimentOptions) -> int:
    """Single-step metrics on the seen and, when present, unseen obstacle test sets."""
    options.write_resolved()
    manifest = SplitManifest.load(options.data_dir)
    splits = [s for s in TEST_SPLITS if manifest.has(s)]
    records = []
    for cfg in options.models:
        model = _load_model(options, cfg)
        model_records = []
        for split in splits:
            model_records += evaluate(model, manifest.samples(split), split)
        _store_metrics(options, cfg, model_records)
        records += model_records
    write_metrics_csv(options.output_dir / METRICS_NAME, records)
    print(StapdeFormatter.format_metrics(summarize(records)))
    if any(r.layout for r in records):
        print(StapdeFormatter.format_metrics(summarize(records, by_layout=True)))
    return 0


def cmd_rollout(options: ExperimentOptions) -> int:
    """Autoregressive (or teacher-forced) rollout metrics for every test sequence."""
    options.write_resolved()
    manifest = SplitManifest.load(options.data_dir)
    splits = [s for s in options.rollout_splits if manifest.has(s)]
    engine = teacher_forced_rollout if options.teacher_forcing else rollout
    records = []
    for cfg in options.models:
        model = _load_model(options, cfg)
        model_records = []
        for split in splits:
            for trajectory in manifest.trajectories(split):
                for sequence in window(trajectory, ROLLOUT, options.rollout_m):
                    model_records += engine(model, sequence, options.rollout_m, split)[1]
        _store_metrics(options, cfg, model_records)
        records += model_records
    write_metrics_csv(options.output_dir / ROLLOUT_METRICS_NAME, records)
    print(StapdeFormatter.format_metrics(summarize(records)))
    return 0


def _export_sequence(model: Model, trajectory: Trajectory, steps: List[int], out_dir: Path, label: str) -> int:
    sequence = window(trajectory, ROLLOUT, max(steps))[0]
    predictions, _ = rollout(model, sequence, max(steps))
    predicted = np.concatenate([sequence.initial, np.stack([p.components for p in predictions])])
    write_trajectory(out_dir / f'{label}_pred.stp', Trajectory(predicted, trajectory.dx, trajectory.stride))
    written = 1
    for m in steps:
        written += len(export_faraday(out_dir, f'{label}_m{m}', sequence.truth(m), predictions[m - 1],
                                      model.signature))
    return written


def cmd_export(options: ExperimentOptions) -> int:
    """Faraday maps of selected rollout steps and the per-epoch loss tables."""
    options.write_resolved()
    if not (options.output_dir / METRICS_NAME).exists():
        raise UsageError('export', f'no evaluation results in {options.output_dir}; run eval first')
    manifest = SplitManifest.load(options.data_dir)
    if not options.export_sequences or not options.export_steps:
        log.warning('export selection is empty, nothing was written')
        print('Nothing selected for export.')
        return 0
    paths = manifest.paths(options.export_split)
    written = 0
    for cfg in options.models:
        model = _load_model(options, cfg)
        out_dir = options.output_dir / EXPORT_DIR / cfg.name
        write_loss_curve(out_dir / LOSS_CURVE_NAME, read_loss_curve(options.model_dir(cfg) / LOSS_CURVE_NAME))
        written += 1
        for index in options.export_sequences:
            if not 0 <= index < len(paths):
                raise UsageError('export', f'sequence {index} outside the {len(paths)} {options.export_split} trajectories')
            trajectory = read_trajectory(paths[index])
            written += _export_sequence(model, trajectory, options.export_steps, out_dir,
                                        f'{options.export_split}{index}')
    log.info(f'exported {written} files to {options.output_dir / EXPORT_DIR}')
    return 0


def cmd_selftest(options: Optional[ExperimentOptions] = None) -> int:
    seed = options.seed if options is not None else 0
    started = time.time()
    results = run_selftest(seed)
    print(StapdeFormatter.format_selftest(results))
    log.info(f'selftest finished in {StapdeFormatter.format_elapsed(time.time() - started)}')
    return 0 if all(r.passed for r in results) else 1


SWEPT_METRICS = {'eval': METRICS_NAME, 'rollout': ROLLOUT_METRICS_NAME}


def run_command(command: str, options: Optional[ExperimentOptions]) -> int:
    """Runs `command` once per swept stride; swept metrics are also merged into the top-level output directory."""
    if options is None or command == 'selftest':
        return COMMANDS[command](options)
    runs = options.expand()
    exit_code = 0
    for run in runs:
        if len(runs) > 1:
            log.info(f'{command} {run.name} in {run.output_dir}')
        exit_code = max(exit_code, COMMANDS[command](run))
    if len(runs) > 1 and command in SWEPT_METRICS:
        name = SWEPT_METRICS[command]
        records = [r for run in runs for r in read_metrics_csv(run.output_dir / name)]
        write_metrics_csv(options.output_dir / name, records)
        options.write_resolved()
        print(StapdeFormatter.format_metrics(summarize(records)))
    return exit_code


COMMANDS: Dict[str, Callable[[ExperimentOptions], int]] = {
    'gen': cmd_gen,
    'train': cmd_train,
    'eval': cmd_eval,
    'rollout': cmd_rollout,
    'export': cmd_export,
    'selftest': cmd_selftest,
}
