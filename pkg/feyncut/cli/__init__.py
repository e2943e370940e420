"""Command-line interface module."""

from .main import main

__all__ = ['main']
