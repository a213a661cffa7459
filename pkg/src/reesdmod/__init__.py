"""Rees algebras of height-two perfect ideals via D-module b-functions."""

__version__ = "0.1.0"
