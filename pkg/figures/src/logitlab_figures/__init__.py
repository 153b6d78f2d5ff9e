"""Paper-style figures from logitlab CSV outputs."""

from .render import FigureSpec, render, KINDS

__all__ = ["FigureSpec", "render", "KINDS"]
__version__ = "0.1.0"
