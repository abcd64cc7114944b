"""Random hives, Gelfand-Tsetlin patterns, and the octahedron recurrence."""

__version__ = "0.1.0"
