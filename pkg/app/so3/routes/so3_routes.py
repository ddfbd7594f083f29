import click

from app.core.middlewares.command_logging_middleware import log_command
from app.so3.controllers.so3_controller import So3Controller
from app.so3.requests.so3_request import CategoryRequest, DescentRequest, MatrixRequest

MATRIX_HELP = 'Matrix M: nine row-major reals, "diag:a,b,c", "eye" or a file'


@click.group("so3")
def so3() -> None:
    """Critical points of Tr(R M) on SO(3)"""


@so3.command("crit")
@click.option("--M", "m", required=True, help=MATRIX_HELP)
@click.option("--check-hessian", is_flag=True, default=False, help="Compare FD Hessians with the diagonal formula")
@click.pass_obj
@log_command("so3 crit")
def crit(config, m: str, check_hessian: bool) -> None:
    """Table of critical values, sign patterns, Morse indices and R0"""
    request = MatrixRequest.parse(M=m, check_hessian=check_hessian)
    So3Controller.from_config(config).crit(request)


@so3.command("descent")
@click.option("--M", "m", required=True, help=MATRIX_HELP)
@click.option("--starts", type=int, default=200, show_default=True, help="Number of random starts")
@click.pass_obj
@log_command("so3 descent")
def descent(config, m: str, starts: int) -> None:
    """Multistart stationary-point search, clustered by geodesic distance"""
    request = DescentRequest.parse(M=m, starts=starts)
    So3Controller.from_config(config).descent(request)


@so3.command("category")
@click.option("--M", "m", required=True, help=MATRIX_HELP)
@click.option("--eta", type=float, default=None, help="Sublevel threshold (default: chosen per case)")
@click.pass_obj
@log_command("so3 category")
def category(config, m: str, eta) -> None:
    """Category lower bound for {R : Tr(R M) >= eta}"""
    request = CategoryRequest.parse(M=m, eta=eta)
    So3Controller.from_config(config).category(request)
