import click

from app.core.middlewares.command_logging_middleware import log_command
from app.landscape.controllers.landscape_controller import LandscapeController
from app.landscape.requests.landscape_request import ProbeRequest, ScanRequest


@click.group("landscape")
def landscape() -> None:
    """F, M and the G functions over the ball"""


@landscape.command("scan")
@click.option("--spec", "spec_file", default=None, help="Boundary data file (default: base 0, A = I)")
@click.option("--grid", type=int, default=5, show_default=True, help="Grid points per axis")
@click.option("--d0", type=float, default=0.1, show_default=True, help="Grid box corners sit at |p| = 1 - d0")
@click.pass_obj
@log_command("landscape scan")
def scan(config, spec_file, grid: int, d0: float) -> None:
    """CSV of F, mu, det M, Gamma and G over a grid (grid^4 rows)"""
    request = ScanRequest.parse(spec_file=spec_file, grid=grid, d0=d0)
    LandscapeController.from_config(config, default_format="csv").scan(request)


@landscape.command("probe")
@click.option("--quantity", required=True, type=click.Choice(["F", "gradF", "M_entry", "M_grad"]))
@click.option("--direction", default="0,0,0,-1", show_default=True, help="Direction u; p = (1 - d) u")
@click.option("--d", "d_list", default="0.2,0.1,0.05,0.025", show_default=True, help="Decreasing distances in (0, 0.5]")
@click.option("--spec", "spec_file", default=None, help="Boundary data file for the M quantities")
@click.option("--entry", default="1,1", show_default=True, help="Entry i,j of M (1-based)")
@click.pass_obj
@log_command("landscape probe")
def probe(config, quantity: str, direction: str, d_list: str, spec_file, entry: str) -> None:
    """Log-log slope of a quantity as p approaches the boundary sphere"""
    request = ProbeRequest.parse(quantity=quantity, direction=direction, d=d_list, spec_file=spec_file, entry=entry)
    LandscapeController.from_config(config).probe(request)
