"""Annotation, map-file, report and synthetic-data I/O."""
