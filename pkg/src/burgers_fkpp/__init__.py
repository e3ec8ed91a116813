"""Travelling fronts of the Burgers-FKPP equation with a Heaviside cut-off."""
from .model import CutoffVariant, ModelParams, PhaseState, c_crit
from .ode import IntegratorConfig
from .shooting import SpeedResult, solve_speed
from .asymptotics import c_hat, delta_c

__all__ = [
    "CutoffVariant",
    "ModelParams",
    "PhaseState",
    "c_crit",
    "IntegratorConfig",
    "SpeedResult",
    "solve_speed",
    "c_hat",
    "delta_c",
]
__version__ = "0.1.0"
