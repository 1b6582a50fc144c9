"""Scenario runner, experiment harness, and command-line interface."""
