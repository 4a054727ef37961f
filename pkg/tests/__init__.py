"""Test suites for laysem."""
