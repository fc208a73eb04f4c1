"""Pausable graph queries with interactive exploration and bookmarks."""

__version__ = "0.1.0"
