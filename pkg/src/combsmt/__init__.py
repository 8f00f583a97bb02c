"""Many-sorted theory combination: Nelson-Oppen, polite and optimized polite."""

__version__ = "0.1.0"
