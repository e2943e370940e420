"""Tests for the feyncut package."""
