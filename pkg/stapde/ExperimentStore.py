import logging
from pathlib import Path
from typing import Iterable, List, Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import sessionmaker

from stapde.dataobjects import EpochLoss, MetricEntry, SessionWrapper, TrainingRun, create_schema

log = logging.getLogger(__name__)


class ExperimentStore:
    """Queryable SQLite log of training runs, per-epoch losses and evaluation metrics."""
    engine: Engine
    session_maker: sessionmaker

    def __init__(self, is_test: bool, root_directory=None):
        self.dir = Path(Path.cwd().joinpath('data') if root_directory is None else root_directory)
        if self.dir.is_file():
            raise FileExistsError('The path must be a directory. a file exists here: {}'.format(self.dir))
        self.dir.mkdir(parents=True, exist_ok=True)

        test_suffix = '-test' if is_test else ''
        self.sqlite_db = self.dir.joinpath(f'experiments{test_suffix}.db')
        self.db_url = 'sqlite+pysqlite:///' + self.sqlite_db.as_posix()

    def open_session(self) -> SessionWrapper:
        return SessionWrapper(self.session_maker(expire_on_commit=False))

    def initialize(self):
        log.debug('connecting to database: ' + self.db_url)
        self.engine = create_engine(self.db_url)
        self.session_maker = sessionmaker(bind=self.engine)
        create_schema(self.engine)

    def start_run(self, model_name: str, algebra: str, channels: int, seed: int, stride: Optional[int],
                  parameter_count: int) -> int:
        with self.open_session() as session:
            run = TrainingRun(model_name=model_name, algebra=algebra, channels=channels, seed=seed, stride=stride,
                              parameter_count=parameter_count)
            session.add(run)
            session.flush()
            log.debug(f'started {run}')
            return run.id

    def add_epoch(self, run_id: int, epoch: int, train_mse: float, val_mse: float):
        with self.open_session() as session:
            session.add(EpochLoss(run_id=run_id, epoch=epoch, train_mse=train_mse, val_mse=val_mse))

    def finish_run(self, run_id: int, best_epoch: int, best_val_mse: float, checkpoint_path: Optional[str]):
        with self.open_session() as session:
            run = session.query(TrainingRun).filter_by(id=run_id).one()
            run.best_epoch = best_epoch
            run.best_val_mse = best_val_mse
            run.checkpoint_path = checkpoint_path

    def add_metrics(self, run_id: Optional[int], records: Iterable) -> int:
        entries = [MetricEntry(run_id=run_id, model_name=r.model, split=r.split, rollout_m=r.rollout_m, stride=r.stride,
                               layout=r.layout, mse=r.mse, corr=r.corr, ssim=r.ssim) for r in records]
        with self.open_session() as session:
            session.add_all(entries)
        return len(entries)

    def get_runs(self, model_name: str = None) -> List[TrainingRun]:
        with self.open_session() as session:
            query = session.query(TrainingRun)
            if model_name is not None:
                query = query.filter_by(model_name=model_name)
            return query.order_by(TrainingRun.id).all()

    def latest_run_for_checkpoint(self, checkpoint_path: str) -> Optional[TrainingRun]:
        with self.open_session() as session:
            return session.query(TrainingRun)\
                .filter_by(checkpoint_path=checkpoint_path)\
                .order_by(TrainingRun.id.desc())\
                .first()

    def get_epoch_losses(self, run_id: int) -> List[EpochLoss]:
        with self.open_session() as session:
            return session.query(EpochLoss)\
                .filter_by(run_id=run_id)\
                .order_by(EpochLoss.epoch)\
                .all()

    def get_metrics(self, run_id: int = None, split: str = None, layout: int = None) -> List[MetricEntry]:
        with self.open_session() as session:
            query = session.query(MetricEntry)
            if run_id is not None:
                query = query.filter_by(run_id=run_id)
            if split is not None:
                query = query.filter_by(split=split)
            if layout is not None:
                query = query.filter_by(layout=layout)
            return query.order_by(MetricEntry.id).all()
