"""
kvpoly - Kauffman-Vogel polynomial of 4-valent rigid-vertex graph diagrams
at B = A^-1, a = A, by the hyperbolic-orientation state sum.
"""

__version__ = "0.1.0"
