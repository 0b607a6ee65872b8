"""Test package: keeps oracle helpers importable relative to test modules."""
