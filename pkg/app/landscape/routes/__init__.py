# Routes exports
from .landscape_routes import landscape as landscape_group

__all__ = ["landscape_group"]
