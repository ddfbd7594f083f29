# Routes exports
from .reduce_routes import reduce as reduce_group

__all__ = ["reduce_group"]
