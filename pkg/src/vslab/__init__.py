"""vslab: exact statistics of polynomial value sets over finite fields."""

__version__ = "0.1.0"
