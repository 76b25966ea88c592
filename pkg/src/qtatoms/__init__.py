"""Exact lattice-diagram harmonics and modified Macdonald polynomials."""
