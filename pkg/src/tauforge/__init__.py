"""Exact-arithmetic engine for free-fermion tau-functions.

Everything in this package computes over exact rationals: Young-diagram
combinatorics, a weight-truncated polynomial ring in graded time variables,
Schur functions, a finite-window fermionic Fock space, group-like operators,
Wick determinants, tau-series and the Hirota bilinear checks that certify
them.  No floating point is used anywhere in the core.
"""

from tauforge.partitions import Partition, enumerate_partitions

__all__ = ["Partition", "enumerate_partitions"]

# re-exported for interactive use; the submodules are the real API surface
