"""Categorical operads, their monads, generalized multicategories, and the
free-algebra adjunction, machine-checked at bounded arity."""

__version__ = "0.1.0"
