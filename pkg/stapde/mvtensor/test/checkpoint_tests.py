import tempfile
from pathlib import Path

import numpy as np

from stapde.algebra import STA2
from stapde.exceptions import ContainerFormatError
from stapde.mvtensor import Parameter, assign_parameters, read_checkpoint, write_checkpoint
from stapde.mvtensor.test.test_base import TestBase


class CheckpointTests(TestBase):

    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / 'model.ckpt'

    def tearDown(self):
        self.tmp.cleanup()

    def make_params(self):
        return [Parameter(STA2, self.rng.standard_normal((2, 1, 3, 3, STA2.size)).astype(np.float32), 'w'),
                Parameter(STA2, self.rng.standard_normal((2, STA2.size)).astype(np.float32), 'b')]

    def test_parameters_restore_in_registration_order(self):
        params = self.make_params()
        write_checkpoint(self.path, {'algebra': 'sta2', 'channels': 2}, params)

        config, values = read_checkpoint(self.path)
        self.assertEqual(config, {'algebra': 'sta2', 'channels': 2})
        self.assertEqual(values.size, sum(p.data.size for p in params))

        fresh = [Parameter(STA2, np.zeros_like(p.data), p.name) for p in params]
        assign_parameters(fresh, values)
        for original, restored in zip(params, fresh):
            np.testing.assert_array_equal(original.data, restored.data)

    def test_file_starts_with_magic(self):
        write_checkpoint(self.path, {}, self.make_params())
        self.assertEqual(self.path.read_bytes()[:8], b'STAPDECK')

    def test_bad_magic(self):
        self.path.write_bytes(b'NOTACKPT' + b'\x00' * 16)
        with self.assertRaises(ContainerFormatError):
            read_checkpoint(self.path)

    def test_truncated_file(self):
        write_checkpoint(self.path, {}, self.make_params())
        self.path.write_bytes(self.path.read_bytes()[:-4])
        with self.assertRaises(ContainerFormatError):
            read_checkpoint(self.path)

    def test_parameter_count_mismatch(self):
        write_checkpoint(self.path, {}, self.make_params())
        _, values = read_checkpoint(self.path)
        with self.assertRaises(ContainerFormatError):
            assign_parameters(self.make_params()[:1], values)
