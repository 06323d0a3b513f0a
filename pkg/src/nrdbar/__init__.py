"""nrdbar: symbolic-numeric toolkit for the dbar-equation on non-reduced
complex spaces with smooth underlying manifold."""

__version__ = "0.1.0"
