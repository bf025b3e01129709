"""Finite verification of hyperbolicity for families of embedded graphs.

The package enumerates small disk- and cylinder-embedded graphs, tests
the content inequality and coloring-criticality exclusions, runs the
constructive cycle separator and the thin-layer cylinder decomposition,
and computes the explicit size thresholds that reduce hyperbolicity of a
class to a finite check.
"""

__version__ = "0.1.0"
