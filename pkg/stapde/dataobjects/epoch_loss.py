from sqlalchemy import Column, Float, ForeignKey, Integer
from sqlalchemy.orm import relationship

from stapde.dataobjects.base import Base


class EpochLoss(Base):
    __tablename__ = 'epoch_losses'

    id = Column('id', Integer, primary_key=True, autoincrement=True)
    run_id = Column('run_id', None, ForeignKey('training_runs.id'), nullable=False)
    epoch = Column('epoch', Integer, nullable=False)
    train_mse = Column('train_mse', Float, nullable=False)
    val_mse = Column('val_mse', Float, nullable=False)

    run = relationship('TrainingRun', back_populates='epochs')
