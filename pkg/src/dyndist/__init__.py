"""Fully dynamic approximate distances in unweighted graphs.

An algebraic engine (dynamic inverse of I - X*A over truncated polynomial
rings) gives exact hop-bounded distances; low-recourse hitting sets and
near-additive emulators cover long distances.  The oracles combine both.

Names resolve lazily, so importing the package does not pull in numpy.
"""
import importlib

__version__ = "0.1.0"

_EXPORTS = {
    "FieldConfig": "field_ring", "Ring": "field_ring",
    "IndexSet": "matrix", "mat_mul": "matrix", "mat_inv_field": "matrix", "mat_inv_poly": "matrix",
    "BatchInverse": "dyn_inverse", "EntryInverse": "dyn_inverse", "SubmatrixInverse": "dyn_inverse",
    "BoundedDistOracle": "bounded_dist", "BfsBoundedDist": "bounded_dist",
    "bounded_dist": "bounded_dist",
    "DynamicHittingSet": "hitting_set", "hs_static_greedy": "hitting_set",
    "Emulator": "emulator",
    "StOracle": "oracles", "SsspOracle": "oracles", "MsspOracle": "oracles",
    "ApspOracle": "oracles", "OracleConfig": "oracles", "DistanceEstimate": "oracles",
    "ExactSt": "extras", "Diameter": "extras", "ApspDistanceOracle": "extras",
    "DynGraph": "graph",
    "DynDistError": "errors", "ConfigError": "errors", "StreamError": "errors",
}

__all__ = sorted(_EXPORTS)


def __getattr__(name):
    if name in _EXPORTS:
        return getattr(importlib.import_module(f".{_EXPORTS[name]}", __name__), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
