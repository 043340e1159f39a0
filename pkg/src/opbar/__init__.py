"""Unary operadic categories, operads and modules over them, bar resolutions and a one-dimensional blob complex."""
__version__ = "0.1.0"
