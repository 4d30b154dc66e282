from .app import create_app
from . import queries

__all__ = ["create_app", "queries"]
