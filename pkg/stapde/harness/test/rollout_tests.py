import numpy as np

from stapde.algebra import G2, STA2, STA3
from stapde.dataset import ROLLOUT, extract, stack_frames, window
from stapde.exceptions import NumericalBlowupError, UsageError
from stapde.harness import evaluate, metric_mse, predict_frame, rollout, teacher_forced_rollout
from stapde.harness.test.test_base import TestBase


class RolloutTests(TestBase):

    def test_first_step_is_a_plain_forward_pass(self):
        model = self.tiny_model(STA2)
        sequence = window(self.random_trajectory(frames=6), ROLLOUT, m=4)[0]
        predictions, _ = rollout(model, sequence, m=1)
        direct = model(stack_frames(list(sequence.initial), STA2, model.dtype)).data[0, 0]
        np.testing.assert_array_equal(predictions[0].components, extract(direct, STA2).components)

    def test_one_record_per_step(self):
        model = self.tiny_model(G2)
        sequence = window(self.random_trajectory(frames=12), ROLLOUT, m=10)[0]
        predictions, records = rollout(model, sequence)
        self.assertEqual(len(predictions), 10)
        self.assertEqual([r.rollout_m for r in records], list(range(1, 11)))
        self.assertTrue(all(r.model == 'tiny' and r.algebra == 'g2' and r.stride == 25 for r in records))

    def test_identity_model_repeats_the_second_frame(self):
        for sig in (G2, STA2):
            model = self.identity_model(sig)
            sequence = window(self.counting_trajectory(frames=8), ROLLOUT, m=6)[0]
            predictions, records = rollout(model, sequence)
            for prediction in predictions:
                np.testing.assert_array_equal(prediction.components, sequence.initial[1])
            # frame j + 1 against frame 1: three components off by j everywhere
            self.assertEqual([r.mse for r in records], [3.0 * j * j for j in range(1, 7)])

    def test_identity_model_in_three_dimensions(self):
        model = self.identity_model(STA3)
        trajectory = self.random_trajectory(frames=4, grid_shape=(3, 3, 3))
        prediction = predict_frame(model, list(trajectory.data[:2]))
        np.testing.assert_array_equal(prediction.components, trajectory.data[1])

    def test_m_out_of_range(self):
        model = self.tiny_model(G2)
        sequence = window(self.random_trajectory(frames=6), ROLLOUT, m=4)[0]
        for m in (0, 5):
            with self.assertRaises(UsageError):
                rollout(model, sequence, m=m)
            with self.assertRaises(UsageError):
                teacher_forced_rollout(model, sequence, m=m)

    def test_non_finite_prediction(self):
        model = self.tiny_model(G2)
        model.layers[-1].bias.data[0, 1] = np.nan
        sequence = window(self.random_trajectory(frames=5), ROLLOUT, m=3)[0]
        with self.assertRaises(NumericalBlowupError):
            rollout(model, sequence)


class TeacherForcingTests(TestBase):

    def test_matches_single_step_evaluation_exactly(self):
        model = self.tiny_model(STA2, channels=3)
        sequence = window(self.random_trajectory(frames=9), ROLLOUT, m=7)[0]
        _, forced = teacher_forced_rollout(model, sequence)
        single = evaluate(model, [sequence.sample(j) for j in range(1, 8)])
        self.assertEqual([(r.mse, r.corr, r.ssim) for r in forced], [(r.mse, r.corr, r.ssim) for r in single])

    def test_differs_from_autoregressive_rollout_after_first_step(self):
        model = self.tiny_model(G2)
        sequence = window(self.random_trajectory(frames=6), ROLLOUT, m=4)[0]
        _, free = rollout(model, sequence)
        _, forced = teacher_forced_rollout(model, sequence)
        self.assertEqual(free[0].mse, forced[0].mse)
        self.assertNotEqual(free[1].mse, forced[1].mse)


class EvaluateTests(TestBase):

    def test_identity_model_scores_against_next_frame(self):
        model = self.identity_model(G2)
        trajectory = self.random_trajectory(frames=5)
        samples = window(trajectory)
        records = evaluate(model, samples, split='test_unseen')
        self.assertEqual(len(records), 3)
        for sample, record in zip(samples, records):
            self.assertEqual(record.split, 'test_unseen')
            self.assertEqual(record.rollout_m, 1)
            self.assertAlmostEqual(record.mse, metric_mse(trajectory.frame(sample.start + 1),
                                                          trajectory.frame(sample.start + 2)), delta=1e-9)

    def test_records_carry_layout_and_parameter_count(self):
        model = self.identity_model(G2)
        trajectory = self.random_trajectory(frames=4)
        trajectory.layout = 6
        records = evaluate(model, window(trajectory))
        self.assertEqual({r.layout for r in records}, {6})
        self.assertEqual({r.parameters for r in records}, {model.param_count()})
