"""Palettes, the colouring Psi and the Delone set it induces.

    >>> import delone
    >>> field = delone.field({"d": 2, "p": [0, 5, 10, 15], "c": [2, 2, 2], "mode": "plain"})
    >>> field.psi([0, 0])
    1
"""

import json

from ._core import (
    CapacityError,
    ConfigError,
    Density,
    DomainError,
    Error,
    Field,
    Palette,
    RangeError,
    Schedule,
    UsageError,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "Density",
    "DomainError",
    "Error",
    "Field",
    "Palette",
    "RangeError",
    "Schedule",
    "UsageError",
    "schedule",
    "density",
    "palette",
    "field",
]


def schedule(spec):
    """Schedule from a dict ({d, p, c, mode}) or an existing Schedule."""
    if isinstance(spec, Schedule):
        return spec
    return Schedule.from_json(json.dumps(spec))


def density(spec=None):
    """Density from a dict such as {"kind": "constant", "params": {"value": 1.5}}; constant 3/2 by default."""
    if spec is None:
        return Density.constant(1.5)
    if isinstance(spec, Density):
        return spec
    return Density.from_json(json.dumps(spec))


def palette(sched, rho=None, **options):
    return Palette(schedule(sched), density(rho), **options)


def field(sched, rho=None, **options):
    return Field(palette(sched, rho, **options))
