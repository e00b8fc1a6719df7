"""Spectral-radius certification of spanning-tree and fractional
k-extendability theorems."""
