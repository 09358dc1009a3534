"""Symplectic inner product graphs Spi(2nu, q) over finite fields."""

from .gf import make_field
from .graph import SpiGraph, build_graph, spi
from .symplectic import SympSpace

__all__ = ["make_field", "SpiGraph", "build_graph", "spi", "SympSpace"]
