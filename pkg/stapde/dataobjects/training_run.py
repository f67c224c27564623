from datetime import datetime

from sqlalchemy import Column, DateTime, Float, Integer, String
from sqlalchemy.orm import relationship

from stapde.dataobjects.base import Base


class TrainingRun(Base):
    __tablename__ = 'training_runs'

    id = Column('id', Integer, primary_key=True, autoincrement=True)
    model_name = Column('model_name', String, nullable=False)
    algebra = Column('algebra', String, nullable=False)
    channels = Column('channels', Integer, nullable=False)
    seed = Column('seed', Integer, nullable=False)
    stride = Column('stride', Integer)
    parameter_count = Column('parameter_count', Integer, nullable=False)
    best_epoch = Column('best_epoch', Integer)
    best_val_mse = Column('best_val_mse', Float)
    checkpoint_path = Column('checkpoint_path', String)
    started = Column('started', DateTime, default=datetime.now)

    epochs = relationship('EpochLoss', back_populates='run', order_by='EpochLoss.epoch', cascade='all, delete-orphan')
    metrics = relationship('MetricEntry', back_populates='run', cascade='all, delete-orphan')

    def __repr__(self):
        return f'TrainingRun({self.id}, {self.model_name}, seed={self.seed}, best_val={self.best_val_mse})'
