"""Slope maps, minimal admissible parabolic reductions and relative Weyl groups."""
