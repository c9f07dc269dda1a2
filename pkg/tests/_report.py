"""Shared store for the acceptance summary lines."""

LINES = []
