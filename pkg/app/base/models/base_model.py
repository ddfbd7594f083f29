from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict


def to_builtin(value: Any) -> Any:
    """Recursively convert numpy containers and scalars to JSON-friendly builtins"""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, BaseModel):
        return to_builtin(value.model_dump())
    if isinstance(value, dict):
        return {k: to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    return value


class DomainModel(BaseModel):
    """
    Base model for all numeric domain entities
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def to_dict(self) -> dict:
        """Convert model to dictionary"""
        return to_builtin(self.model_dump())

    @classmethod
    def from_dict(cls, data: dict):
        """Create model from dictionary"""
        return cls(**data)
