"""Test package for foliation-verify."""
