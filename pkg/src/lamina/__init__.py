"""Stability conditions on continuous type-A quivers and measured laminations."""
__version__ = "0.1.0"
