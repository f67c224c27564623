import numpy as np

from stapde.algebra import G2, G3, STA2, STA3
from stapde.exceptions import UsageError
from stapde.mvtensor import (TEST_DTYPE, ConvKernel, MvTensor, Parameter, Tape, clifford_conv, ga_relu, gradcheck,
                             mse_loss, residual_add)
from stapde.mvtensor.test.test_base import TestBase


class CliffordConvTests(TestBase):

    def test_scalar_one_kernel_is_identity(self):
        x = self.random_tensor(G2, (2, 1, 5, 4))
        out = clifford_conv(x, self.blade_kernel(G2, 0))
        np.testing.assert_array_equal(out.data, x.data)

    def test_e1_kernel_maps_e1_field_to_scalar_ones(self):
        x = MvTensor.zeros(G2, (1, 1, 4, 4), dtype=TEST_DTYPE)
        x.data[..., 1] = 1.0
        out = clifford_conv(x, self.blade_kernel(G2, 1))
        expected = np.zeros_like(x.data)
        expected[..., 0] = 1.0
        np.testing.assert_array_equal(out.data, expected)

    def test_linearity(self):
        for sig in (G2, STA2, STA3):
            spatial = (4, 5) if sig.dim < 4 else (3, 4)
            kern = self.random_kernel(sig, 3, 2, (3, 3), bias=False)
            x = self.random_tensor(sig, (2, 2) + spatial)
            y = self.random_tensor(sig, (2, 2) + spatial)
            summed = clifford_conv(MvTensor(sig, x.data + y.data), kern)
            separate = clifford_conv(x, kern).data + clifford_conv(y, kern).data
            np.testing.assert_allclose(summed.data, separate, atol=1e-10)

    def test_scalar_blades_match_plain_convolution(self):
        x = MvTensor.zeros(G2, (1, 1, 6, 7), dtype=TEST_DTYPE)
        x.data[..., 0] = self.rng.standard_normal((1, 1, 6, 7))
        weight = np.zeros((1, 1, 3, 3, G2.size), dtype=TEST_DTYPE)
        weight[..., 0] = self.rng.standard_normal((1, 1, 3, 3))
        kern = ConvKernel(Parameter(G2, weight), Parameter(G2, np.zeros((1, G2.size), dtype=TEST_DTYPE)))
        out = clifford_conv(x, kern)

        image = np.pad(x.data[0, 0, :, :, 0], 1)
        taps = weight[0, 0, :, :, 0]
        for i in range(6):
            for j in range(7):
                expected = sum(taps[a, b] * image[i + a, j + b] for a in range(3) for b in range(3))
                self.assertAlmostEqual(out.data[0, 0, i, j, 0], expected, delta=1e-6)
        np.testing.assert_array_equal(out.data[..., 1:], 0.0)

    def test_same_padding_keeps_shape_and_valid_shrinks(self):
        x = self.random_tensor(G3, (1, 2, 5, 5, 5))
        kern = self.random_kernel(G3, 1, 2, (3, 3, 3))
        self.assertEqual(clifford_conv(x, kern).shape, (1, 1, 5, 5, 5, 8))
        self.assertEqual(clifford_conv(x, kern, padding='valid').shape, (1, 1, 3, 3, 3, 8))

    def test_bias_is_added_per_output_channel(self):
        x = MvTensor.zeros(STA2, (1, 1, 3, 3), dtype=TEST_DTYPE)
        kern = self.random_kernel(STA2, 2, 1, (3, 3))
        out = clifford_conv(x, kern)
        for co in range(2):
            np.testing.assert_array_equal(out.data[0, co], np.broadcast_to(kern.bias.data[co], (3, 3, STA2.size)))

    def test_usage_errors(self):
        x = self.random_tensor(G2, (1, 2, 4, 4))
        with self.assertRaises(UsageError):
            clifford_conv(x, self.random_kernel(STA2, 1, 2, (3, 3)))
        with self.assertRaises(UsageError):
            clifford_conv(x, self.random_kernel(G2, 1, 3, (3, 3)))
        with self.assertRaises(UsageError):
            clifford_conv(x, self.random_kernel(G2, 1, 2, (3, 3)), padding='reflect')
        with self.assertRaises(UsageError):
            self.random_kernel(G2, 1, 2, (2, 3))

    def test_gradients_match_finite_differences(self):
        for sig in (G2, STA2):
            x = self.random_tensor(sig, (2, 2, 4, 3), requires_grad=True)
            target = self.random_tensor(sig, (2, 3, 4, 3))
            kern = self.random_kernel(sig, 3, 2, (3, 3))
            mask = list(range(sig.size))

            def build(tape):
                return mse_loss(clifford_conv(x, kern, tape=tape), target, mask, tape=tape)

            self.assertLessEqual(gradcheck(build, [x, kern.weight, kern.bias]), 1e-4)

    def test_gradients_match_finite_differences_in_3d(self):
        x = self.random_tensor(G3, (1, 1, 3, 3, 3), requires_grad=True)
        target = self.random_tensor(G3, (1, 2, 3, 3, 3))
        kern = self.random_kernel(G3, 2, 1, (3, 3, 3))

        def build(tape):
            return mse_loss(clifford_conv(x, kern, tape=tape), target, [1, 2, 4], tape=tape)

        self.assertLessEqual(gradcheck(build, [x, kern.weight, kern.bias]), 1e-4)


class GaReluTests(TestBase):

    def test_all_negative_gives_zero(self):
        x = MvTensor(G2, -np.abs(self.rng.standard_normal((1, 1, 3, 3, 4))) - 0.1)
        np.testing.assert_array_equal(ga_relu(x).data, 0.0)

    def test_all_positive_is_identity(self):
        x = MvTensor(G2, np.abs(self.rng.standard_normal((1, 1, 3, 3, 4))) + 0.1)
        np.testing.assert_array_equal(ga_relu(x).data, x.data)

    def test_mixed_matches_elementwise_loop(self):
        x = self.random_tensor(STA2, (2, 2, 3, 3))
        out = ga_relu(x).data
        for index, value in np.ndenumerate(x.data):
            self.assertEqual(out[index], value if value > 0 else 0.0)

    def test_gradient_matches_finite_differences(self):
        x = self.away_from_zero(STA2, (1, 2, 3, 3))
        target = self.random_tensor(STA2, (1, 2, 3, 3))

        def build(tape):
            return mse_loss(ga_relu(x, tape=tape), target, [1, 2, 3], tape=tape)

        self.assertLessEqual(gradcheck(build, [x]), 1e-4)


class ResidualAddTests(TestBase):

    def test_add_zero(self):
        x = self.random_tensor(G2, (1, 2, 3, 3))
        zero = MvTensor.zeros(G2, (1, 2, 3, 3), dtype=TEST_DTYPE)
        np.testing.assert_array_equal(residual_add(x, zero).data, x.data)

    def test_add_negation(self):
        x = self.random_tensor(G2, (1, 2, 3, 3))
        np.testing.assert_array_equal(residual_add(x, MvTensor(G2, -x.data)).data, 0.0)

    def test_commutative(self):
        x = self.random_tensor(STA2, (1, 2, 3, 3))
        y = self.random_tensor(STA2, (1, 2, 3, 3))
        np.testing.assert_array_equal(residual_add(x, y).data, residual_add(y, x).data)

    def test_shape_mismatch(self):
        with self.assertRaises(UsageError):
            residual_add(self.random_tensor(G2, (1, 2, 3, 3)), self.random_tensor(G2, (1, 1, 3, 3)))

    def test_gradient_reaches_both_operands(self):
        x = self.random_tensor(G2, (1, 1, 2, 2), requires_grad=True)
        y = self.random_tensor(G2, (1, 1, 2, 2), requires_grad=True)
        target = self.random_tensor(G2, (1, 1, 2, 2))

        def build(tape):
            return mse_loss(residual_add(x, y, tape=tape), target, [0, 1, 2, 3], tape=tape)

        self.assertLessEqual(gradcheck(build, [x, y]), 1e-4)
        np.testing.assert_array_equal(x.grad, y.grad)


class MseLossTests(TestBase):

    def test_identical_tensors_give_zero(self):
        x = self.random_tensor(STA2, (2, 3, 4, 4))
        self.assertEqual(mse_loss(x, x, [1, 2, 3]).item(), 0.0)

    def test_single_cell_unit_difference(self):
        pred = MvTensor.zeros(G2, (1, 1, 1, 1), dtype=TEST_DTYPE)
        target = MvTensor.zeros(G2, (1, 1, 1, 1), dtype=TEST_DTYPE)
        target.data[..., 1] = 1.0
        self.assertEqual(mse_loss(pred, target, [1]).item(), 1.0)

    def test_matches_elementwise_loop(self):
        pred = self.random_tensor(STA2, (2, 1, 4, 5))
        target = self.random_tensor(STA2, (2, 1, 4, 5))
        mask = [1, 2, 3]
        total = 0.0
        for b in range(2):
            for i in range(4):
                for j in range(5):
                    for m in mask:
                        total += (pred.data[b, 0, i, j, m] - target.data[b, 0, i, j, m]) ** 2
        self.assertLessEqual(abs(mse_loss(pred, target, mask).item() - total / (2 * 4 * 5)), 1e-6)

    def test_unmasked_blades_are_ignored(self):
        pred = MvTensor.zeros(G2, (1, 1, 2, 2), dtype=TEST_DTYPE)
        target = MvTensor.zeros(G2, (1, 1, 2, 2), dtype=TEST_DTYPE)
        target.data[..., 0] = 5.0
        self.assertEqual(mse_loss(pred, target, [1, 2]).item(), 0.0)

    def test_usage_errors(self):
        x = self.random_tensor(G2, (1, 1, 2, 2))
        with self.assertRaises(UsageError):
            mse_loss(x, x, [])
        with self.assertRaises(UsageError):
            mse_loss(x, x, [4])
        with self.assertRaises(UsageError):
            mse_loss(x, self.random_tensor(G2, (1, 1, 2, 3)), [1])
