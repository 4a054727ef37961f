"""Test fixtures for laysem."""
