"""Double state sum link invariants for solid-torus and thickened-torus diagrams."""

__version__ = "0.1.0"
