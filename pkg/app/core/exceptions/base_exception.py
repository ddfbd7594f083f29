from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class ErrorDocument(BaseModel):
    """
    Machine-readable description of a failed command.
    Written to stderr as JSON when the command was asked for JSON output.
    """

    error: str = Field(..., description="Exception class name")
    message: str = Field(..., description="Human-readable message")
    exit_code: int = Field(..., description="Process exit status")
    run_id: Optional[str] = Field(default=None, description="Run identifier")
    command: Optional[str] = Field(default=None, description="Failing command")
    details: Optional[str] = Field(default=None, description="Extra detail")
    error_data: Dict[str, Any] = Field(default_factory=dict)
