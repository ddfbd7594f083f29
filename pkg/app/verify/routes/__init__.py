# Routes exports
from .verify_routes import verify as verify_command

__all__ = ["verify_command"]
