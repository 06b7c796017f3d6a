"""Finite fields, monomials and JSON serialization helpers."""
