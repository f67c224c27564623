from stapde.algebra import G2, G3, STA2, STA3, Signature
from stapde.exceptions import ConfigurationError
from stapde.models import ModelConfig, preset
from stapde.models.test.test_base import TestBase


class ModelConfigTests(TestBase):

    def test_spatial_dim_follows_algebra(self):
        self.assertEqual(ModelConfig(G2, 8).spatial_dim, 2)
        self.assertEqual(ModelConfig(STA2, 8).spatial_dim, 2)
        self.assertEqual(ModelConfig(G3, 8).spatial_dim, 3)
        self.assertEqual(ModelConfig(STA3, 8).spatial_dim, 3)

    def test_invalid_values(self):
        with self.assertRaises(ConfigurationError):
            ModelConfig(G2, 8, blocks=1).validate()
        with self.assertRaises(ConfigurationError):
            ModelConfig(G2, 0).validate()
        with self.assertRaises(ConfigurationError):
            ModelConfig(G2, 8, kernel=4).validate()
        with self.assertRaises(ConfigurationError):
            ModelConfig(G2, 8, spatial_dim=3).validate()
        with self.assertRaises(ConfigurationError):
            ModelConfig(Signature([1, 1, 1, 1]), 8).validate()

    def test_dict_round_trip(self):
        cfg = ModelConfig(STA3, 5, blocks=4, seed=9, name='probe')
        restored = ModelConfig.from_dict(cfg.as_dict())
        self.assertEqual(restored.as_dict(), cfg.as_dict())
        self.assertEqual(restored.algebra, STA3)

    def test_missing_key(self):
        values = ModelConfig(G2, 4).as_dict()
        del values['channels']
        with self.assertRaises(ConfigurationError):
            ModelConfig.from_dict(values)

    def test_presets(self):
        self.assertEqual(preset('clifford_resnet_2d').channels, 32)
        self.assertEqual(preset('staresnet_2d').algebra, STA2)
        self.assertEqual(preset('staresnet_2d', channels=6).channels, 6)
        self.assertEqual(preset('clifford_resnet_3d').blocks, 20)
        with self.assertRaises(ConfigurationError):
            preset('unet')

    def test_preset_name_can_be_overridden(self):
        self.assertEqual(preset('staresnet_2d').name, 'staresnet_2d')
        cfg = preset('staresnet_2d', channels=None, seed=2, name='staresnet_2d_s2')
        self.assertEqual((cfg.name, cfg.seed, cfg.channels), ('staresnet_2d_s2', 2, 24))
