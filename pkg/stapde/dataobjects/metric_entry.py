from sqlalchemy import Column, Float, ForeignKey, Integer, String
from sqlalchemy.orm import relationship

from stapde.dataobjects.base import Base


class MetricEntry(Base):
    __tablename__ = 'metric_entries'

    id = Column('id', Integer, primary_key=True, autoincrement=True)
    run_id = Column('run_id', None, ForeignKey('training_runs.id'), nullable=True)
    model_name = Column('model_name', String, nullable=False)
    split = Column('split', String, nullable=False)
    rollout_m = Column('rollout_m', Integer, nullable=False)
    stride = Column('stride', Integer, nullable=True)
    layout = Column('layout', Integer, nullable=True)
    mse = Column('mse', Float, nullable=False)
    corr = Column('corr', Float, nullable=False)
    ssim = Column('ssim', Float, nullable=False)

    run = relationship('TrainingRun', back_populates='metrics')
