"""Finite Packing/Covering theory for pairs of matroids and trees of matroids."""

__version__ = "0.1.0"
