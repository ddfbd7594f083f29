import json
import os
from typing import Any, Dict, List

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from app.core.exceptions import ValidationError


class BaseRequest(BaseModel):
    """Base class for all request schemas"""

    @classmethod
    def parse(cls, **data: Any) -> "BaseRequest":
        """Validate raw command-line values; failures exit with status 2"""
        try:
            return cls(**data)
        except PydanticValidationError as e:
            err = e.errors()[0]
            where = ".".join(str(part) for part in err.get("loc", ())) or "input"
            raise ValidationError(f"Invalid {where}: {err.get('msg', 'invalid value')}", details=str(e)) from e

    def get(self) -> Dict[str, Any]:
        """Get validated data as a dictionary from the request."""
        return self.model_dump()


def parse_reals(text: str, expected: int, name: str) -> List[float]:
    """Parse a comma- or space-separated list of reals of a fixed length"""
    parts = [t for t in text.replace(",", " ").split() if t]
    try:
        values = [float(t) for t in parts]
    except ValueError as e:
        raise ValueError(f"{name} must contain real numbers, got {text!r}") from e
    if len(values) != expected:
        raise ValueError(f"{name} needs {expected} values, got {len(values)}")
    return values


def parse_matrix3(text: str, name: str = "M") -> List[List[float]]:
    """Parse "diag:a,b,c", "eye" or nine row-major reals into a 3x3 list"""
    text = text.strip()
    if text.lower() in ("eye", "identity", "i"):
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    if text.lower().startswith("diag:"):
        d = parse_reals(text[5:], 3, name)
        return [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]
    v = parse_reals(text, 9, name)
    return [v[0:3], v[3:6], v[6:9]]


def load_matrix3(text: str, name: str = "M") -> List[List[float]]:
    """parse_matrix3, or the contents of a file holding a JSON matrix or nine reals.

    A JSON object may carry the matrix under "M".
    """
    if not os.path.isfile(text):
        return parse_matrix3(text, name)
    with open(text, "r", encoding="utf-8") as fh:
        content = fh.read()
    try:
        data = json.loads(content)
    except json.JSONDecodeError:
        return parse_matrix3(content, name)
    if isinstance(data, dict):
        data = data.get("M")
    flat = [float(v) for row in data for v in (row if isinstance(row, list) else [row])] if isinstance(data, list) else []
    if len(flat) != 9:
        raise ValueError(f"{name} file {text!r} must hold a 3x3 matrix")
    return [flat[0:3], flat[3:6], flat[6:9]]
