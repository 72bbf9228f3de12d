"""Test package for bunsetsukit."""
