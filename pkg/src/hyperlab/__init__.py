"""Finite-dimensional linear dynamics lab: dense sets, matrix semigroups,
commuting normal forms and grid-covering density evidence."""

__version__ = "0.1.0"

from .density import CoverageReport, GridCover, PolyDisc, Window, coverage, density_trend, verdict
from .errors import ConfigError, HyperlabError, PreconditionError
from .normal_form import normal_form
from .semigroup import MatrixSemigroup, example_G_theta, hypercyclicity_probe, make_semigroup, orbit
from .surd import Surd

__all__ = [
    "ConfigError", "CoverageReport", "GridCover", "HyperlabError", "MatrixSemigroup", "PolyDisc",
    "PreconditionError", "Surd", "Window", "coverage", "density_trend", "example_G_theta",
    "hypercyclicity_probe", "make_semigroup", "normal_form", "orbit", "verdict",
]
