import logging
from typing import Optional

import click
from dotenv import load_dotenv

from app.cli.command_group import CommandGroup
from app.cli.models.run_config import RunConfig
from app.core.exception_handlers import register_exception_handlers
from config.logging import setup_logging
from config.settings import settings

# Load environment variables
load_dotenv()

# Setup logging
setup_logging(settings.app.log_level, settings.app.LOG_FILE)

logger = logging.getLogger("ymreduce.main")


@click.group(cls=CommandGroup)
@click.option("--quad-radial", type=int, default=None, help="Radial Gauss-Legendre order")
@click.option("--quad-sphere", type=int, default=None, help="Angular Gauss-Legendre order on S^3")
@click.option("--quad-tol", type=float, default=None, help="Target relative quadrature error")
@click.option(
    "--mc-samples", type=int, default=None, help="Monte Carlo samples for the verify monte_carlo check (default 100000)"
)
@click.option("--seed", type=int, default=None, help="Seed for every random draw of the run")
@click.option("--out", default=None, help="Write the output to this file instead of stdout")
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "text"]), default=None, help="Output format")
@click.version_option("1.0.0", prog_name="ymreduce")
@click.pass_context
def cli(
    ctx: click.Context,
    quad_radial: Optional[int],
    quad_sphere: Optional[int],
    quad_tol: Optional[float],
    mc_samples: Optional[int],
    seed: Optional[int],
    out: Optional[str],
    fmt: Optional[str],
) -> None:
    """Finite-dimensional reduction of the eps-Dirichlet Yang-Mills problem on B^4"""
    ctx.obj = RunConfig.from_flags(
        quad_radial=quad_radial,
        quad_sphere=quad_sphere,
        quad_tol=quad_tol,
        mc_samples=mc_samples,
        seed=seed,
        out=out,
        fmt=fmt,
    )
    logger.debug("Run configuration", extra={"config": ctx.obj.model_dump(exclude_none=True)})


# Register exception handlers
register_exception_handlers(cli)

# Include command groups
from app.boundary.routes import perturb_command, synth_command
from app.harmonic.routes import field_command
from app.landscape.routes import landscape_group
from app.reduced.routes import reduce_group
from app.so3.routes import so3_group
from app.verify.routes import verify_command

cli.add_command(field_command)
cli.add_command(landscape_group)
cli.add_command(so3_group)
cli.add_command(synth_command)
cli.add_command(perturb_command)
cli.add_command(reduce_group)
cli.add_command(verify_command)

if __name__ == "__main__":
    cli()
