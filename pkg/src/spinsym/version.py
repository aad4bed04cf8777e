"""Single source for the engine version string."""

__version__ = "0.1.0"
