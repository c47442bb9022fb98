from .base import RunLogger
from .sqlite import SQLiteRunLogger

__all__ = ["RunLogger", "SQLiteRunLogger"]
