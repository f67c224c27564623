from sqlalchemy.engine import Engine
from sqlalchemy.ext.declarative import declarative_base

Base = declarative_base()


def create_schema(engine: Engine):
    """Creates any experiment tables missing from the database."""
    Base.metadata.create_all(engine)
