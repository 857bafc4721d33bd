"""Hardy-type inequality laboratory for multivariable means."""

__version__ = "1.0.0"
