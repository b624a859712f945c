"""Bundled level schemes."""
