import click

from app.core.middlewares.command_logging_middleware import log_command
from app.reduced.controllers.reduce_controller import ReduceController
from app.reduced.requests.reduce_request import (
    FindRequest,
    HypothesesRequest,
    InvarianceRequest,
    StildeRequest,
    WindowRequest,
)

WINDOW_HELP = "Window d0,D1,D2,C0 (default: suggested from a grid)"


@click.group("reduce")
def reduce() -> None:
    """The reduced energy F_eps on the parameter space"""


@reduce.command("find")
@click.option("--spec", "spec_file", required=True, help="Boundary data file")
@click.option("--eps", type=float, required=True, help="Coupling epsilon in (0, 1)")
@click.option("--window", default=None, help=WINDOW_HELP)
@click.option("--strategy", default="minimize", show_default=True, type=click.Choice(["minimize", "all-fibers", "all_fibers"]))
@click.option("--starts", type=int, default=None, help="Multistart count for minimize")
@click.option("--grid", type=int, default=None, help="Grid points per axis for all-fibers (at most 9)")
@click.pass_obj
@log_command("reduce find")
def find(config, spec_file: str, eps: float, window, strategy: str, starts, grid) -> None:
    """Interior critical points of F_eps"""
    request = FindRequest.parse(spec_file=spec_file, eps=eps, window=window, strategy=strategy, starts=starts, grid=grid)
    ReduceController.from_config(config).find(request)


@reduce.command("window")
@click.option("--spec", "spec_file", required=True, help="Boundary data file")
@click.option("--c0", type=float, default=None, help="Sublevel constant C0 > 0")
@click.option("--d0", type=float, default=None, help="Distance d0 in (0, 1) from the sphere")
@click.option("--grid", type=int, default=None, help="Grid points per axis")
@click.pass_obj
@log_command("reduce window")
def window(config, spec_file: str, c0, d0, grid) -> None:
    """Suggest d0, lambda0, D1, D2 from grid extrema of F and Gamma"""
    request = WindowRequest.parse(spec_file=spec_file, c0=c0, d0=d0, grid=grid)
    ReduceController.from_config(config).window(request)


@reduce.command("invariance")
@click.option("--spec", "spec_file", required=True, help="Boundary data file")
@click.option("--eps", type=float, required=True, help="Coupling epsilon in (0, 1)")
@click.option("--window", default=None, help=WINDOW_HELP)
@click.option("--samples", type=int, default=200, show_default=True, help="Samples per face")
@click.pass_obj
@log_command("reduce invariance")
def invariance(config, spec_file: str, eps: float, window, samples: int) -> None:
    """Margins of the flow inequalities on the window faces"""
    request = InvarianceRequest.parse(spec_file=spec_file, eps=eps, window=window, samples=samples)
    ReduceController.from_config(config).invariance(request)


@reduce.command("stilde")
@click.option("--spec", "spec_file", required=True, help="Boundary data file")
@click.option("--p0", required=True, help="Point p0, four reals with |p0| < 1")
@click.option("--eps", type=float, required=True, help="Coupling epsilon in (0, 1)")
@click.option("--eta", type=float, default=None, help="Threshold (default: chosen per case)")
@click.option("--samples", type=int, default=100, show_default=True, help="Rotations sampled")
@click.pass_obj
@log_command("reduce stilde")
def stilde(config, spec_file: str, p0: str, eps: float, eta, samples: int) -> None:
    """lambda0 and the sampled sublevel inclusion at p0"""
    request = StildeRequest.parse(spec_file=spec_file, p0=p0, eps=eps, eta=eta, samples=samples)
    ReduceController.from_config(config).stilde(request)


@reduce.command("hypotheses")
@click.option("--spec", "spec_file", required=True, help="Boundary data file")
@click.option("--p0", required=True, help="Point p0, four reals with |p0| < 1")
@click.option("--window", default=None, help="Window d0,D1,D2,C0 for the fiber-bracket conditions")
@click.pass_obj
@log_command("reduce hypotheses")
def hypotheses(config, spec_file: str, p0: str, window) -> None:
    """Which existence hypotheses hold at p0"""
    request = HypothesesRequest.parse(spec_file=spec_file, p0=p0, window=window)
    ReduceController.from_config(config).hypotheses(request)
