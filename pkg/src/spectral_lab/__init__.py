"""Spectral Lab: spectral analysis of reuploader quantum circuits."""

__version__ = "0.1.0"
