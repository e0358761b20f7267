"""dialact: cross-lingual dialogue act recognition toolkit."""

__version__ = "0.1.0"
