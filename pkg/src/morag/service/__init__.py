from .engine import Engine
from .app import create_app

__all__ = ["Engine", "create_app"]
