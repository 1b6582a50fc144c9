"""Bundled scenario maps (package data)."""
