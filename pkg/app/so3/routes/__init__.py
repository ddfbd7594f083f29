# Routes exports
from .so3_routes import so3 as so3_group

__all__ = ["so3_group"]
