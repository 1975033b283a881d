"""Alamouti space-time codes over Gaussian and Eisenstein integers."""

__version__ = "0.1.0"
