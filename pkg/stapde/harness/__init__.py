from stapde.harness.faraday import DIFF_CLIP, FaradayMap, difference_map, export_faraday, faraday_map, write_grid
from stapde.harness.metrics import (MetricsRecord, metric_correlation, metric_mse, metric_ssim, read_metrics_csv,
                                    summarize, write_metrics_csv)
from stapde.harness.rollout import evaluate, predict_frame, rollout, teacher_forced_rollout
from stapde.harness.selftest import CheckResult, model_gradcheck, run_selftest
from stapde.harness.trainer import (CHECKPOINT_NAME, LOSS_CURVE_NAME, EpochRecord, TrainConfig, Trainer, TrainResult,
                                    read_loss_curve, write_loss_curve)
