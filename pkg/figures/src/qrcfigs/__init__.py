"""Stateless CSV-to-image translators for qrcsim experiment outputs."""

from .render import FIGURES, FigureSpec, MissingColumnError, RenderError, render

__all__ = ["FIGURES", "FigureSpec", "MissingColumnError", "RenderError", "render"]

__version__ = "0.1.0"
