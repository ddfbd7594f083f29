import json
import os
from typing import Generic, Type, TypeVar

from app.base.models.base_model import to_builtin

ModelType = TypeVar("ModelType")


class JsonFileRepository(Generic[ModelType]):
    """Persists one model per JSON file"""

    def __init__(self, model: Type[ModelType]):
        self.model = model

    def to_document(self, obj: ModelType) -> dict:
        return to_builtin(obj.to_dict())

    def from_document(self, document: dict) -> ModelType:
        return self.model.from_dict(document)

    def load(self, path: str) -> ModelType:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
        return self.from_document(document)

    def save(self, obj: ModelType, path: str) -> str:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_document(obj), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path
