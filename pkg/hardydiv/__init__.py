"""
hardydiv - weighted discrete Hardy inequalities and the divergence equation on cusp domains

Numerical checks of the weighted estimate for div u = f on
{0 < x1 < 1, 0 < x2 < x1^gamma}, built from a discrete Hardy inequality,
a zero-mean decomposition over dyadic strips and local minimal-energy solves.
"""

__version__ = "0.1.0"
