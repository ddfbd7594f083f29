import click

from app.boundary.controllers.boundary_controller import BoundaryController
from app.boundary.requests.perturb_request import PerturbRequest
from app.boundary.requests.synth_request import SynthRequest
from app.core.middlewares.command_logging_middleware import log_command


@click.command("synth")
@click.option("--target", required=True, help='Target M: "diag:a,b,c", "eye" or nine row-major reals')
@click.option("--p0", required=True, help="Point p0, four reals with |p0| < 1")
@click.option("--base", "base_file", default=None, help="Boundary data file whose base is kept")
@click.pass_obj
@log_command("synth")
def synth(config, target: str, p0: str, base_file) -> None:
    """Boundary data whose interaction matrix at p0 equals the target"""
    request = SynthRequest.parse(target=target, p0=p0, base_file=base_file)
    BoundaryController.from_config(config).synth(request)


@click.command("perturb")
@click.option("--spec", "spec_file", required=True, help="Boundary data file")
@click.option("--p0", required=True, help="Point p0, four reals with |p0| < 1")
@click.option("--mu", required=True, type=float, help="Separation size, > 0")
@click.option("--richardson", is_flag=True, default=False, help="Also estimate the shift slopes")
@click.pass_obj
@log_command("perturb")
def perturb(config, spec_file: str, p0: str, mu: float, richardson: bool) -> None:
    """Perturb boundary data so that M^t M at p0 has a strictly separated spectrum"""
    request = PerturbRequest.parse(spec_file=spec_file, p0=p0, mu=mu, richardson=richardson)
    BoundaryController.from_config(config).perturb(request)
