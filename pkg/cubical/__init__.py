"""Cubical complexes, the redundancy oracle and discrete Morse reductions."""
