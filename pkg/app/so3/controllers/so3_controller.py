import logging
from typing import Optional

import numpy as np

from app.base.controllers.base_controllers import BaseController
from app.core.middlewares.run_context_middleware import context_extra
from app.so3.requests.so3_request import CategoryRequest, DescentRequest, MatrixRequest
from app.so3.responses.so3_response import CategoryResponse, CriticalSetResponse, DescentResponse
from app.so3.services.so3_service import So3Service

logger = logging.getLogger("ymreduce.controllers")


class So3Controller(BaseController):
    """Controller for so3 crit, so3 descent and so3 category"""

    def __init__(self, service: Optional[So3Service] = None, out: Optional[str] = None, fmt: str = "json", seed: int = 0):
        super().__init__(out, fmt)
        self.service = service or So3Service()
        self.seed = seed

    @classmethod
    def from_config(cls, config) -> "So3Controller":
        return cls(So3Service(config.search.tol_mu_rel), config.out, config.output_format(), config.effective_seed)

    def crit(self, request: MatrixRequest) -> CriticalSetResponse:
        """Enumerate the critical rotations of Tr(R M)"""
        logger.debug("Critical set request received", extra=context_extra(request_data=request.get()))

        m = np.asarray(request.M, dtype=float)
        critical = self.service.enumerate_critical(m)
        checks = [self.service.hessian_check(m, cp) for cp in critical] if request.check_hessian else None

        response = CriticalSetResponse.from_domain(m, critical, checks)
        self.emit_document(response, ("value", "signs", "index", "degenerate", "R0"), response.rows())
        return response

    def descent(self, request: DescentRequest) -> DescentResponse:
        """Multistart search for stationary points, clustered"""
        logger.debug("Descent request received", extra=context_extra(request_data=request.get()))

        report = self.service.descent_oracle(np.asarray(request.M, dtype=float), request.starts, self.seed)
        if report.converged_starts < report.n_starts:
            logger.warning(
                "Some descent starts did not converge",
                extra=context_extra(failed=report.n_starts - report.converged_starts),
            )

        response = DescentResponse.from_domain(report)
        self.emit_document(response, ("value", "count"), response.rows())
        return response

    def category(self, request: CategoryRequest) -> CategoryResponse:
        """Category lower bound for the sublevel set at eta"""
        logger.debug("Category request received", extra=context_extra(request_data=request.get()))

        report = self.service.category_report(np.asarray(request.M, dtype=float), request.eta)
        response = CategoryResponse.from_domain(report)
        self.emit_document(response, ("quantity", "value"), response.rows())
        return response
