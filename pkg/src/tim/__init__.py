"""Topological interference management with reconfigurable antennas.

Analysis of alignment/conflict graphs, linear symmetric DoF upper bounds,
explicit beamforming/mode-switching constructions and exact verification.
"""

from .bounds import DofBound, TopologyClass, classify, upper_bound
from .graphs import TopologyAnalysis, analyze
from .scheme import LinearScheme, synthesize, synthesize_half, synthesize_two_coint
from .topology import NetworkTopology, load_topology, parse_topology
from .verify import VerificationReport, verify_scheme

__all__ = [
    "DofBound",
    "LinearScheme",
    "NetworkTopology",
    "TopologyAnalysis",
    "TopologyClass",
    "VerificationReport",
    "analyze",
    "classify",
    "load_topology",
    "parse_topology",
    "synthesize",
    "synthesize_half",
    "synthesize_two_coint",
    "upper_bound",
    "verify_scheme",
]
__version__ = "0.1.0"
