"""Bundled example models (JSON data files)."""
