"""Real quadratic fields: cone decompositions, zeta values at s=0 and s=1, Shintani invariants."""

__version__ = "0.1.0"
