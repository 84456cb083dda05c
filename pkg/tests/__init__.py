"""Test package for pqc-expressibility."""
