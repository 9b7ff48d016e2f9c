"""
graphcx: graph complexes at finite bidegree.

Hairy, oriented, sourced and ribbon graph complexes, the forest map between
hairy and oriented graphs, and exact sparse linear algebra over the rationals.
"""

__version__ = "0.1.0"
