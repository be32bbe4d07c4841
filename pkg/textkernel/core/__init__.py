"""Core utilities: errors, logging, configuration and dataset profiles."""
