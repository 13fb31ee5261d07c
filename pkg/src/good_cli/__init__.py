"""good - command-line front-end for the Good distribution library."""

__version__ = "0.1.0"
