import json
import logging

from pydantic import ValidationError as PydanticValidationError

from app.base.repositories.base_repository import JsonFileRepository
from app.boundary.models.boundary_spec import BoundarySpec
from app.core.exceptions import InvalidBoundarySpec, ValidationError

logger = logging.getLogger("ymreduce.repositories")


class BoundarySpecRepository(JsonFileRepository[BoundarySpec]):
    """Reads and writes boundary data files.

    Schema: {"base": [[[{"mono": [e1, e2, e3, e4], "coef": r}, ...] x 4] x 3], "A": 3x3}.
    Harmonicity of the base is checked on load.
    """

    def __init__(self):
        super().__init__(BoundarySpec)

    def from_document(self, document: dict) -> BoundarySpec:
        if not isinstance(document, dict) or "A" not in document:
            raise InvalidBoundarySpec("boundary data must be a JSON object with an \"A\" matrix")
        try:
            return super().from_document(document)
        except PydanticValidationError as e:
            raise InvalidBoundarySpec(f"malformed boundary data: {e.errors()[0].get('msg')}", details=str(e)) from e
        except (KeyError, TypeError) as e:
            raise InvalidBoundarySpec(f"malformed boundary data: {e}") from e

    def load(self, path: str) -> BoundarySpec:
        logger.debug("Loading boundary data", extra={"path": path})
        try:
            return super().load(path)
        except FileNotFoundError as e:
            raise ValidationError(f"boundary data file not found: {path}") from e
        except json.JSONDecodeError as e:
            raise InvalidBoundarySpec(f"boundary data is not valid JSON: {e}") from e
