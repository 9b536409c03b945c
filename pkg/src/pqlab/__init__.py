"""Desk-scale classical and post-quantum cryptography."""

from .errors import PqlabError

__all__ = ["PqlabError"]
__version__ = "0.1.0"
