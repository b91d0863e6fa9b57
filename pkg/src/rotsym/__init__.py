"""Exact tools for SO(3)-invariant bipartite and multipartite spin states."""

__version__ = "0.1.0"
