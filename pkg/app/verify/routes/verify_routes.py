import click

from app.core.middlewares.command_logging_middleware import log_command
from app.verify.controllers.verify_controller import VerifyController
from app.verify.requests.verify_request import VerifyRequest


@click.command("verify")
@click.option("--only", multiple=True, help="Run just this check (repeatable, or comma-separated)")
@click.option("--list", "list_only", is_flag=True, default=False, help="List the checks and exit")
@click.pass_obj
@log_command("verify")
def verify(config, only, list_only: bool) -> None:
    """Run the acceptance suite; exit 1 if any check fails"""
    request = VerifyRequest.parse(only=list(only) or None, list_only=list_only)
    VerifyController.from_config(config).verify(request)
