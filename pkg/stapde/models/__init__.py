from stapde.models.config import PRESETS, ModelConfig, preset
from stapde.models.resnet import (Model, build, channel_chain, channel_sweep, formula_param_count, load_checkpoint,
                                  param_count, save_checkpoint)
