"""Sentiment dynamics and influential-user discovery for threaded discussions."""

__version__ = "0.1.0"
