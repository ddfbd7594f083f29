from typing import List

from app.base.responses.base_response import BaseResponse
from app.verify.models.check_result import CheckResult, VerifyReport


class VerifyResponse(BaseResponse):
    """Per-check outcomes of the acceptance suite"""

    passed: bool
    failed: List[str]
    checks: List[CheckResult]

    @classmethod
    def from_domain(cls, report: VerifyReport) -> "VerifyResponse":
        return cls(passed=report.passed, failed=report.failed, checks=report.checks)

    def rows(self):
        return [[c.name, c.passed, c.measured, c.tolerance, round(c.elapsed, 3), c.detail] for c in self.checks]


class CheckListResponse(BaseResponse):
    checks: List[str]

    def rows(self):
        return [[name] for name in self.checks]
