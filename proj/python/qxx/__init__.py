"""QXX initial placement, routing and parameter search."""

from ._core import (
    Circuit,
    CircuitParseError,
    Device,
    DeviceError,
    Params,
    Surrogate,
    depth,
    features,
    gdepth,
    generate,
    place,
    probabilities,
    random_search,
    ratio,
    route,
    space_size,
    verify,
    wrs,
)

__all__ = [
    "Circuit",
    "CircuitParseError",
    "Device",
    "DeviceError",
    "Params",
    "Surrogate",
    "depth",
    "features",
    "gdepth",
    "generate",
    "place",
    "probabilities",
    "random_search",
    "ratio",
    "route",
    "space_size",
    "verify",
    "wrs",
]
