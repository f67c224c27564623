import tempfile
from pathlib import Path

import numpy as np

from stapde.algebra import G2, STA2
from stapde.dataset import window
from stapde.exceptions import ConfigurationError, NumericalBlowupError, UsageError
from stapde.harness import CHECKPOINT_NAME, LOSS_CURVE_NAME, TrainConfig, Trainer, read_loss_curve
from stapde.harness.test.test_base import TestBase
from stapde.models import load_checkpoint
from stapde.mvtensor import TEST_DTYPE


class TrainConfigTests(TestBase):

    def test_defaults(self):
        cfg = TrainConfig()
        self.assertEqual((cfg.epochs, cfg.batch_size, cfg.lr), (50, 32, 1e-3))

    def test_invalid_values(self):
        for kwargs in ({'epochs': 0}, {'batch_size': 0}, {'lr': -1.0}, {'lr': float('nan')}):
            with self.assertRaises(ConfigurationError):
                TrainConfig(**kwargs).validate()


class TrainerTests(TestBase):

    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.out = Path(self.tmp.name)
        self.train_samples = window(self.random_trajectory(frames=6, grid_shape=(5, 5)))
        self.val_samples = window(self.random_trajectory(frames=4, grid_shape=(5, 5)))

    def tearDown(self):
        self.tmp.cleanup()

    def test_zero_learning_rate_keeps_parameters(self):
        model = self.tiny_model(G2)
        before = [p.data.copy() for p in model.parameters()]
        result = Trainer(model, TrainConfig(epochs=3, batch_size=2, lr=0.0)).train(self.train_samples, self.val_samples)
        for original, p in zip(before, model.parameters()):
            np.testing.assert_array_equal(p.data, original)
        self.assertEqual(len({r.val_mse for r in result.curve}), 1)
        for record in result.curve[1:]:
            self.assertAlmostEqual(record.train_mse, result.curve[0].train_mse, delta=1e-12)

    def test_overfits_a_single_sample(self):
        model = self.tiny_model(G2, channels=8, blocks=3)
        sample = window(self.random_trajectory(frames=3, grid_shape=(4, 4)))
        result = Trainer(model, TrainConfig(epochs=200, batch_size=1, lr=1e-2)).train(sample, sample)
        self.assertLessEqual(result.best_val, result.curve[0].train_mse / 100)

    def test_same_seed_same_curve_and_checkpoint(self):
        runs = []
        for name in ('a', 'b'):
            model = self.tiny_model(STA2, seed=5)
            result = Trainer(model, TrainConfig(epochs=2, batch_size=2, lr=1e-3, seed=9)).train(
                self.train_samples, self.val_samples, self.out / name)
            runs.append(([(r.train_mse, r.val_mse) for r in result.curve], result.checkpoint.read_bytes()))
        self.assertEqual(runs[0], runs[1])

    def test_single_epoch_writes_one_checkpoint(self):
        model = self.tiny_model(G2)
        result = Trainer(model, TrainConfig(epochs=1, batch_size=4)).train(self.train_samples, self.val_samples,
                                                                            self.out)
        self.assertEqual(result.checkpoints_written, 1)
        self.assertEqual(result.best_epoch, 1)
        self.assertEqual(result.checkpoint, self.out / CHECKPOINT_NAME)
        restored = load_checkpoint(result.checkpoint, dtype=TEST_DTYPE)
        self.assertEqual(restored.config.name, 'tiny')
        curve = read_loss_curve(self.out / LOSS_CURVE_NAME)
        self.assertEqual([r.epoch for r in curve], [1])
        self.assertEqual(curve[0].val_mse, result.best_val)

    def test_epoch_callback(self):
        seen = []
        Trainer(self.tiny_model(G2), TrainConfig(epochs=2, batch_size=4), on_epoch=seen.append).train(
            self.train_samples, self.val_samples)
        self.assertEqual([r.epoch for r in seen], [1, 2])

    def test_blowup_reports_epoch(self):
        model = self.tiny_model(G2)
        model.layers[0].weight.data[0, 0, 0, 0, 0] = np.inf
        with self.assertRaises(NumericalBlowupError) as caught:
            Trainer(model, TrainConfig(epochs=1, batch_size=2)).train(self.train_samples, self.val_samples)
        self.assertIn('epoch 1', str(caught.exception))

    def test_empty_splits(self):
        with self.assertRaises(UsageError):
            Trainer(self.tiny_model(G2), TrainConfig(epochs=1)).train([], self.val_samples)
        with self.assertRaises(UsageError):
            Trainer(self.tiny_model(G2), TrainConfig(epochs=1)).train(self.train_samples, [])
