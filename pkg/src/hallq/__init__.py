"""Hall numbers, Hall polynomials, and the degenerate Hall Lie algebra
for the gentle one-cycle algebras Lambda(n-1, 1, 1) over prime fields."""

__version__ = "0.1.0"
