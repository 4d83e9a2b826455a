"""Smooth plane quartics over binary finite fields: models, descent, census."""

__version__ = "0.1.0"
