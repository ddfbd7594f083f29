# Routes exports
from .boundary_routes import perturb as perturb_command
from .boundary_routes import synth as synth_command

__all__ = ["synth_command", "perturb_command"]
