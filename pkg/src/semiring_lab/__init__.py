"""Verification workbench for finite additively idempotent semirings."""

__version__ = "0.1.0"
