import logging
from typing import Optional

from app.base.controllers.base_controllers import BaseController
from app.boundary.repositories.boundary_spec_repository import BoundarySpecRepository
from app.boundary.requests.perturb_request import PerturbRequest
from app.boundary.requests.synth_request import SynthRequest
from app.boundary.responses.boundary_response import PerturbResponse, SynthResponse
from app.boundary.services.boundary_service import BoundaryService
from app.core.middlewares.run_context_middleware import context_extra
from app.landscape.services.landscape_service import LandscapeService
from app.quadrature.services.quadrature_service import QuadratureService

logger = logging.getLogger("ymreduce.controllers")


class BoundaryController(BaseController):
    """Controller for the synth and perturb commands"""

    def __init__(
        self,
        service: Optional[BoundaryService] = None,
        repository: Optional[BoundarySpecRepository] = None,
        out: Optional[str] = None,
        fmt: str = "json",
    ):
        super().__init__(out, fmt)
        self.service = service or BoundaryService()
        self.repository = repository or BoundarySpecRepository()

    @classmethod
    def from_config(cls, config) -> "BoundaryController":
        landscape = LandscapeService(QuadratureService(config.quadrature_spec()))
        return cls(BoundaryService(landscape), BoundarySpecRepository(), config.out, config.output_format())

    def synth(self, request: SynthRequest) -> SynthResponse:
        """Synthesize A for the target M and print the boundary data"""
        logger.debug("Synth request received", extra=context_extra(request_data=request.get()))

        base = None
        if request.base_file:
            base = self.repository.load(request.base_file).base
        spec = self.service.synthesize(request.target, request.p0, base)
        check = self.service.landscape.interaction_matrix(spec, request.p0)
        h = self.service.h_matrix(request.p0)

        response = SynthResponse.from_domain(spec, request.p0, request.target, check.M, h.matrix)
        self.emit_document(response, ("a1", "a2", "a3"), response.rows())
        return response

    def perturb(self, request: PerturbRequest) -> PerturbResponse:
        """Separate the spectrum of M^t M at p0 and print the new boundary data"""
        logger.debug("Perturb request received", extra=context_extra(request_data=request.get()))

        spec = self.repository.load(request.spec_file)
        result = self.service.perturb_nondegenerate(spec, request.p0, request.mu)
        richardson = None
        if request.richardson:
            richardson = self.service.richardson_slopes(spec, request.p0, request.mu)
        if not result.strictly_separated:
            logger.warning(
                "Perturbed spectrum is not strictly separated",
                extra=context_extra(gaps=result.gaps),
            )

        response = PerturbResponse.from_domain(result, richardson)
        self.emit_document(response, ("quantity", "v1", "v2", "v3"), response.rows())
        return response
