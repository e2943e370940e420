"""
feyncut

Hopf algebras of Feynman graphs with Cutkosky cuts: core and cut coproducts,
the cointeraction with the incidence coalgebra of graph-tree pairs,
Dyson-Schwinger equations for cut Green functions and parametric
Symanzik polynomials.
"""

__version__ = "0.1.0"

from .config.settings import Config
from .core.cutgraph import PreCutGraph
from .core.graph import Graph
from .utils.file_utils import ResultsExporter
from .utils.visualization import GraphDrawer

__all__ = [
    'Graph',
    'PreCutGraph',
    'Config',
    'ResultsExporter',
    'GraphDrawer',
]
