import logging
from typing import Optional

from app.base.controllers.base_controllers import BaseController
from app.core.middlewares.run_context_middleware import context_extra
from app.harmonic.requests.field_request import FieldRequest
from app.harmonic.responses.field_response import FieldResponse
from app.harmonic.services.harmonic_service import HarmonicService
from app.quadrature.services.quadrature_service import QuadratureService

logger = logging.getLogger("ymreduce.controllers")


class FieldController(BaseController):
    """Controller for the field command"""

    def __init__(self, service: Optional[HarmonicService] = None, out: Optional[str] = None, fmt: str = "json"):
        super().__init__(out, fmt)
        self.service = service or HarmonicService()

    @classmethod
    def from_config(cls, config) -> "FieldController":
        quadrature = QuadratureService(config.quadrature_spec())
        return cls(HarmonicService(quadrature), config.out, config.output_format())

    def field(self, request: FieldRequest) -> FieldResponse:
        """Evaluate and print every closed-form field at (p, x)"""
        logger.debug("Field request received", extra=context_extra(request_data=request.get()))

        sample = self.service.sample(request.p, request.x, fallback=request.fallback)
        response = FieldResponse.from_domain(sample)
        self.emit_document(response, ("name", "value"), response.rows())
        return response
