import click

from app.core.middlewares.command_logging_middleware import log_command
from app.harmonic.controllers.field_controller import FieldController
from app.harmonic.requests.field_request import FieldRequest


@click.command("field")
@click.option("--p", "p", required=True, help="Concentration point p, four reals with |p| < 1")
@click.option("--x", "x", required=True, help="Evaluation point x, four reals with |x| <= 1")
@click.option("--no-fallback", is_flag=True, default=False, help="Refuse the small-|p| branch")
@click.pass_obj
@log_command("field")
def field(config, p: str, x: str, no_fallback: bool) -> None:
    """Print alpha, grad alpha, h, (dh)^- and the boundary trace at (p, x)"""
    request = FieldRequest.parse(p=p, x=x, fallback=not no_fallback)
    FieldController.from_config(config).field(request)
