"""Static smell detection for Python source trees."""

__version__ = "0.1.0"
