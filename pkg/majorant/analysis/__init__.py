"""Exact evaluation, quadrature, sup-norm bounds and Parseval identities."""
