from stapde.mvtensor.adam import AdamState, adam_step
from stapde.mvtensor.checkpoint import assign_parameters, read_checkpoint, write_checkpoint
from stapde.mvtensor.gradcheck import gradcheck, numerical_gradient, relative_error
from stapde.mvtensor.ops import ConvKernel, clifford_conv, ga_relu, mse_loss, residual_add
from stapde.mvtensor.tape import DEFAULT_DTYPE, TEST_DTYPE, MvTensor, Node, Parameter, Tape
