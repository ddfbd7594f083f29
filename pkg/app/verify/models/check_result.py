from typing import List, Optional

from app.base.models.base_model import DomainModel


class CheckResult(DomainModel):
    """Outcome of one acceptance check; measured is compared against tolerance"""

    name: str
    passed: bool
    measured: Optional[float] = None
    tolerance: Optional[float] = None
    elapsed: float
    detail: str = ""


class VerifyReport(DomainModel):
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]
