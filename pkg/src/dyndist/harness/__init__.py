"""Stream files, generators, ground truth, replay/verify and benchmarks.

Submodules load on first use so ``dyndist`` can cap BLAS threads first.
"""
import importlib

_EXPORTS = {
    "UpdateStream": "stream", "Insert": "stream", "Delete": "stream", "Query": "stream",
    "loads": "stream", "load": "stream",
    "gen_stream": "generators", "heavy_transitions": "generators",
    "oracle_bfs": "ground_truth", "floyd_warshall": "ground_truth", "exact_diameter": "ground_truth",
    "RunConfig": "runner", "run": "runner", "strip_timings": "runner", "SCHEMA": "runner",
    "bench": "bench",
}

__all__ = sorted(_EXPORTS)


def __getattr__(name):
    if name in _EXPORTS:
        return getattr(importlib.import_module(f".{_EXPORTS[name]}", __name__), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
