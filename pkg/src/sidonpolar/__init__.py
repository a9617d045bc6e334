"""Bose-Chowla Sidon sets, their Cayley sum graphs, and orthogonal polarity graphs."""

__version__ = "0.1.0"
