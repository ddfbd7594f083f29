# Routes exports
from .field_routes import field as field_command

__all__ = ["field_command"]
