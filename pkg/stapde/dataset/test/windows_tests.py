import numpy as np

from stapde.algebra import G2, STA2
from stapde.dataset import ROLLOUT, batches, stack_samples, window
from stapde.dataset.test.test_base import TestBase
from stapde.exceptions import UsageError
from stapde.mvtensor import TEST_DTYPE


class WindowTests(TestBase):

    def test_train_mode_yields_every_consecutive_window(self):
        samples = window(self.counting_trajectory(12))
        self.assertEqual(len(samples), 10)
        for i, sample in enumerate(samples):
            self.assertEqual(sample.frame_indices, (i, i + 1, i + 2))
            self.assertEqual(sample.inputs[0, 0, 0, 0], i)
            self.assertEqual(sample.inputs[1, 0, 0, 0], i + 1)
            self.assertEqual(sample.target[0, 0, 0], i + 2)

    def test_rollout_mode_uses_whole_trajectory(self):
        sequences = window(self.counting_trajectory(12), ROLLOUT, m=10)
        self.assertEqual(len(sequences), 1)
        sequence = sequences[0]
        self.assertEqual(sequence.m, 10)
        self.assertEqual(sequence.truth(10).components[0, 0, 0], 11)
        np.testing.assert_array_equal(sequence.initial[:, 0, 0, 0], [0, 1])

    def test_short_trajectories(self):
        with self.assertRaises(UsageError):
            window(self.counting_trajectory(3), ROLLOUT, m=2)
        with self.assertRaises(UsageError):
            window(self.counting_trajectory(2))
        with self.assertRaises(UsageError):
            window(self.counting_trajectory(5), ROLLOUT, m=0)


class BatchTests(TestBase):

    def test_partial_last_batch_is_kept(self):
        samples = window(self.counting_trajectory(12))
        self.assertEqual([len(b) for b in batches(samples, 4, seed=1)], [4, 4, 2])

    def test_same_seed_and_epoch_same_order(self):
        samples = window(self.counting_trajectory(12))
        first = [s.start for b in batches(samples, 3, seed=5, epoch=2) for s in b]
        second = [s.start for b in batches(samples, 3, seed=5, epoch=2) for s in b]
        self.assertEqual(first, second)

    def test_epochs_reshuffle_the_same_samples(self):
        samples = window(self.counting_trajectory(12))
        first = [s.start for b in batches(samples, 3, seed=5, epoch=0) for s in b]
        second = [s.start for b in batches(samples, 3, seed=5, epoch=1) for s in b]
        self.assertNotEqual(first, second)
        self.assertEqual(sorted(first), sorted(second))

    def test_invalid_batch_size(self):
        with self.assertRaises(UsageError):
            list(batches([], 0, seed=0))


class StackTests(TestBase):

    def test_shapes_and_contents(self):
        samples = window(self.counting_trajectory(6, grid_shape=(4, 5)))[:3]
        x, y = stack_samples(samples, STA2, TEST_DTYPE)
        self.assertEqual(x.shape, (3, 2, 4, 5, 8))
        self.assertEqual(y.shape, (3, 1, 4, 5, 8))
        self.assertEqual(x.data.dtype, np.float64)
        # Ey of the third target lands on g20 = -g02 (blade 0b101)
        self.assertEqual(y.data[2, 0, 0, 0, 0b101], -4.0)

    def test_euclidean_input_channels_follow_time(self):
        samples = window(self.counting_trajectory(4))
        x, _ = stack_samples(samples, G2)
        np.testing.assert_array_equal(x.data[1, :, 0, 0, 1], [1.0, 2.0])
