import logging
from typing import List, Optional

from pydantic import ValidationError as PydanticValidationError

from app.base.controllers.base_controllers import BaseController
from app.boundary.models.boundary_spec import BoundarySpec
from app.boundary.repositories.boundary_spec_repository import BoundarySpecRepository
from app.core.exceptions import ValidationError
from app.core.middlewares.run_context_middleware import context_extra
from app.landscape.services.landscape_service import LandscapeService
from app.quadrature.services.quadrature_service import QuadratureService
from app.reduced.models.param_point import SearchWindow
from app.reduced.requests.reduce_request import (
    FindRequest,
    HypothesesRequest,
    InvarianceRequest,
    StildeRequest,
    WindowRequest,
)
from app.reduced.responses.reduce_response import (
    FindResponse,
    HypothesesResponse,
    InvarianceResponse,
    StildeResponse,
    WindowResponse,
)
from app.reduced.services.reduced_service import ReducedService
from app.so3.services.so3_service import So3Service

logger = logging.getLogger("ymreduce.controllers")


class ReduceController(BaseController):
    """Controller for the reduce subcommands"""

    def __init__(
        self,
        service: Optional[ReducedService] = None,
        repository: Optional[BoundarySpecRepository] = None,
        out: Optional[str] = None,
        fmt: str = "json",
        seed: Optional[int] = None,
    ):
        super().__init__(out, fmt)
        self.service = service or ReducedService()
        self.repository = repository or BoundarySpecRepository()
        self.seed = seed

    @classmethod
    def from_config(cls, config) -> "ReduceController":
        landscape = LandscapeService(QuadratureService(config.quadrature_spec()))
        service = ReducedService(landscape, So3Service(config.search.tol_mu_rel), config.search)
        return cls(service, BoundarySpecRepository(), config.out, config.output_format(), config.effective_seed)

    def _window(self, bspec: BoundarySpec, values: Optional[List[float]]) -> SearchWindow:
        if values is None:
            search = self.service.search
            return self.service.suggest_window(bspec, search.window_c0, search.window_d0)
        d0, D1, D2, C0 = values
        try:
            return SearchWindow.from_values(d0, D1, D2, C0)
        except PydanticValidationError as e:
            raise ValidationError(f"Invalid window: {e.errors()[0].get('msg', 'invalid value')}", details=str(e)) from e

    def find(self, request: FindRequest) -> FindResponse:
        """Locate interior critical points of F_eps"""
        logger.debug("Find request received", extra=context_extra(request_data=request.get()))

        bspec = self.repository.load(request.spec_file)
        window = self._window(bspec, request.window)
        found = self.service.find_critical(
            bspec,
            window,
            request.eps,
            strategy=request.strategy,
            n_starts=request.starts,
            grid_points=request.grid,
            seed=self.seed,
        )
        response = FindResponse.from_domain(found, window, request.eps, request.strategy)
        self.emit_document(
            response,
            ("p1", "p2", "p3", "p4", "lambda_sq", "value", "grad_norm", "branch", "class", "index"),
            response.rows(),
        )
        return response

    def window(self, request: WindowRequest) -> WindowResponse:
        """Suggest a search window from grid extrema"""
        logger.debug("Window request received", extra=context_extra(request_data=request.get()))

        bspec = self.repository.load(request.spec_file)
        search = self.service.search
        window = self.service.suggest_window(
            bspec,
            request.c0 if request.c0 is not None else search.window_c0,
            request.d0 if request.d0 is not None else search.window_d0,
            request.grid,
        )
        response = WindowResponse.from_domain(window)
        self.emit_document(response, ("quantity", "value"), response.rows())
        return response

    def invariance(self, request: InvarianceRequest) -> InvarianceResponse:
        """Sample the flow inequalities on the window faces"""
        logger.debug("Invariance request received", extra=context_extra(request_data=request.get()))

        bspec = self.repository.load(request.spec_file)
        window = self._window(bspec, request.window)
        report = self.service.check_flow_invariance(bspec, window, request.eps, request.samples, self.seed)
        if not report.passed:
            logger.warning("A flow inequality fails on a window face", extra=context_extra(window=window.to_dict()))

        response = InvarianceResponse.from_domain(report)
        self.emit_document(
            response,
            ("face", "samples", "in_sublevel", "vacuous", "min_margin", "min_margin_scaled"),
            response.rows(),
        )
        return response

    def stilde(self, request: StildeRequest) -> StildeResponse:
        """Build and sample the lifted sublevel set at p0"""
        logger.debug("Stilde request received", extra=context_extra(request_data=request.get()))

        bspec = self.repository.load(request.spec_file)
        report = self.service.stilde_set(bspec, request.p0, request.eta, request.eps, request.samples, self.seed)
        response = StildeResponse.from_domain(report)
        self.emit_document(response, ("quantity", "value"), response.rows())
        return response

    def hypotheses(self, request: HypothesesRequest) -> HypothesesResponse:
        """Report which existence hypotheses hold at p0"""
        logger.debug("Hypotheses request received", extra=context_extra(request_data=request.get()))

        bspec = self.repository.load(request.spec_file)
        window = self._window(bspec, request.window) if request.window is not None else None
        report = self.service.hypotheses_report(bspec, request.p0, window)
        response = HypothesesResponse.from_domain(report)
        self.emit_document(response, ("statement", "case", "holds", "function", "detail"), response.rows())
        return response
