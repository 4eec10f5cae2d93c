"""Protogossip test suite."""
