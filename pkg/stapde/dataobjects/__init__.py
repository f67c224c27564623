from stapde.dataobjects.base import Base, create_schema
from stapde.dataobjects.epoch_loss import EpochLoss
from stapde.dataobjects.metric_entry import MetricEntry
from stapde.dataobjects.sessionwrapper import SessionWrapper
from stapde.dataobjects.training_run import TrainingRun
