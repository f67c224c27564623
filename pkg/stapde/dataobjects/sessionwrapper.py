import logging

from sqlalchemy.orm import Session

log = logging.getLogger(__name__)


class SessionWrapper:
    """Commits when the block completes, rolls back when it raises, and always closes."""

    def __init__(self, inner_session: Session):
        self.session = inner_session

    def __enter__(self) -> Session:
        return self.session

    def __exit__(self, exc_type, exc_val, exc_tb):
        try:
            if exc_type is None:
                self.session.commit()
            else:
                log.debug(f'rolling back experiment store session after {exc_type.__name__}')
                self.session.rollback()
        finally:
            self.session.close()
