"""Exact section-operator machinery for algebraic power series over finite fields."""
