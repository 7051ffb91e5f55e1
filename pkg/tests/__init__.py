"""Majorant tests."""
