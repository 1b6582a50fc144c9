"""Desk-scale patrol-robot suite: fuzzy avoidance, wall-following patrol,
deterministic 2D simulation, wire protocol, and a control-center service."""

__version__ = "0.1.0"
