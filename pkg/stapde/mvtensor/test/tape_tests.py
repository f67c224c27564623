import numpy as np

from stapde.algebra import G2
from stapde.exceptions import UsageError
from stapde.mvtensor import TEST_DTYPE, MvTensor, Node, Tape, clifford_conv, ga_relu, mse_loss
from stapde.mvtensor.test.test_base import TestBase


class TapeTests(TestBase):

    def test_scalar_weight_gradient(self):
        kern = self.blade_kernel(G2, 0, value=3.0)
        x = MvTensor.zeros(G2, (1, 1, 1, 1), dtype=TEST_DTYPE)
        x.data[..., 0] = 1.0
        target = MvTensor.zeros(G2, (1, 1, 1, 1), dtype=TEST_DTYPE)

        tape = Tape()
        loss = mse_loss(clifford_conv(x, kern, tape=tape), target, [0], tape=tape)
        self.assertEqual(loss.item(), 9.0)
        tape.backward(loss)
        self.assertAlmostEqual(kern.weight.grad[0, 0, 0, 0, 0], 6.0)
        np.testing.assert_array_equal(kern.weight.grad[..., 1:], 0.0)

    def test_bias_gradient_equals_output_gradient_for_zero_input(self):
        kern = self.random_kernel(G2, 2, 1, (1, 1))
        x = MvTensor.zeros(G2, (1, 1, 1, 1), dtype=TEST_DTYPE)
        target = self.random_tensor(G2, (1, 2, 1, 1))

        tape = Tape()
        out = clifford_conv(x, kern, tape=tape)
        loss = mse_loss(out, target, [0, 1, 2, 3], tape=tape)
        tape.backward(loss)
        np.testing.assert_allclose(kern.bias.grad, out.grad[0, :, 0, 0, :])

    def test_backward_without_forward(self):
        with self.assertRaises(UsageError):
            Tape().backward(Node(np.zeros(())))

    def test_backward_requires_scalar_loss(self):
        x = self.random_tensor(G2, (1, 1, 2, 2), requires_grad=True)
        tape = Tape()
        out = ga_relu(x, tape=tape)
        with self.assertRaises(UsageError):
            tape.backward(out)

    def test_gradients_accumulate_across_uses(self):
        x = self.random_tensor(G2, (1, 1, 2, 2), requires_grad=True)
        kern = self.blade_kernel(G2, 0)
        target = MvTensor.zeros(G2, (1, 1, 2, 2), dtype=TEST_DTYPE)

        tape = Tape()
        loss = mse_loss(clifford_conv(x, kern, tape=tape), target, [0, 1, 2, 3], tape=tape)
        tape.backward(loss)
        first = x.grad.copy()
        tape = Tape()
        loss = mse_loss(clifford_conv(x, kern, tape=tape), target, [0, 1, 2, 3], tape=tape)
        tape.backward(loss)
        np.testing.assert_allclose(x.grad, 2 * first)

    def test_identical_runs_are_bitwise_identical(self):
        losses = []
        for _ in range(2):
            self.setUp()
            x = self.random_tensor(G2, (2, 2, 4, 4))
            kern = self.random_kernel(G2, 2, 2, (3, 3))
            target = self.random_tensor(G2, (2, 2, 4, 4))
            tape = Tape()
            loss = mse_loss(ga_relu(clifford_conv(x, kern, tape=tape), tape=tape), target, [1, 2], tape=tape)
            tape.backward(loss)
            losses.append((loss.item(), kern.weight.grad.copy()))
        self.assertEqual(losses[0][0], losses[1][0])
        np.testing.assert_array_equal(losses[0][1], losses[1][1])
