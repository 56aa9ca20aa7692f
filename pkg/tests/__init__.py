"""Test package for packcover."""
