import logging
from typing import Optional, Union

from app.base.controllers.base_controllers import BaseController
from app.core.exceptions import VerificationFailed
from app.core.middlewares.run_context_middleware import context_extra
from app.landscape.services.landscape_service import LandscapeService
from app.quadrature.services.quadrature_service import QuadratureService
from app.reduced.services.reduced_service import ReducedService
from app.so3.services.so3_service import So3Service
from app.verify.requests.verify_request import VerifyRequest
from app.verify.responses.verify_response import CheckListResponse, VerifyResponse
from app.verify.services.verify_service import VerifyService

logger = logging.getLogger("ymreduce.controllers")


class VerifyController(BaseController):
    """Controller for the verify command"""

    def __init__(self, service: Optional[VerifyService] = None, out: Optional[str] = None, fmt: str = "json"):
        super().__init__(out, fmt)
        self.service = service or VerifyService()

    @classmethod
    def from_config(cls, config) -> "VerifyController":
        quadrature = QuadratureService(config.quadrature_spec())
        reduced = ReducedService(LandscapeService(quadrature), So3Service(config.search.tol_mu_rel), config.search)
        service = VerifyService(quadrature, reduced, config.effective_seed)
        return cls(service, config.out, config.output_format())

    def verify(self, request: VerifyRequest) -> Union[VerifyResponse, CheckListResponse]:
        """
        Run the acceptance checks and write the report.

        Raises:
            VerificationFailed: Any check failed; the report is written first
        """
        logger.debug("Verify request received", extra=context_extra(request_data=request.get()))

        if request.list_only:
            listing = CheckListResponse(checks=self.service.names)
            self.emit_document(listing, ("check",), listing.rows())
            return listing

        report = self.service.run(request.only)
        response = VerifyResponse.from_domain(report)
        self.emit_document(response, ("check", "passed", "measured", "tolerance", "elapsed", "detail"), response.rows())

        if not report.passed:
            raise VerificationFailed(f"{len(report.failed)} check(s) failed: {', '.join(report.failed)}")
        return response
