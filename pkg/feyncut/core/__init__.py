"""Core modules for feyncut."""

from .algebra import GraphSum, Monomial, TensorSum
from .coproducts import Antipode, get_coproduct
from .cut_matrix import CutMatrix, cut_matrix
from .cutgraph import GraphForestPair, PreCutGraph
from .dse import GreenSeries, green_series
from .errors import FeyncutError, GraphError
from .forests import spanning_forests, spt
from .graph import Graph
from .symanzik import phi, psi

__all__ = [
    'Graph',
    'PreCutGraph',
    'GraphForestPair',
    'GraphSum',
    'Monomial',
    'TensorSum',
    'Antipode',
    'get_coproduct',
    'CutMatrix',
    'cut_matrix',
    'GreenSeries',
    'green_series',
    'FeyncutError',
    'GraphError',
    'spanning_forests',
    'spt',
    'psi',
    'phi',
]
